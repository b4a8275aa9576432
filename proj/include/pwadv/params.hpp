#pragma once

#include "pwadv/dataflow_model.hpp"
#include "pwadv/transfer_model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwadv {

/// Everything the cost models need, including the pipeline configurations of
/// the intermediate optimisation steps used by the validation checks.
struct ModelParams {
    PipelineSpec column_pipeline{71, 2, 250e6};
    std::int64_t column_elements = 64;
    PipelineSpec batched_pipeline{71, 1, 250e6};
    std::int64_t batched_elements = 4096;
    PipelineSpec extracted_pipeline{65, 1, 250e6};
    /// Clock implied by the 3.2 ns period achieved after retiming.
    double retimed_synth_clock_hz = 312.5e6;

    SystemModel system{
        KernelConfig{
            PipelineSpec{72, 1, 310e6},
            MemoryModel{6, 1751318500.2053213, 0.9230646499823699, 256 * 8, 8},
            64,
            2,
        },
        DmaConfig{},
        FlopProfile{21, 32},
    };
};

/// Parse a parameter file on top of `base`. Files ending in .json hold a
/// (possibly nested) JSON object; anything else is `key = value` lines with
/// `#` comments. Unknown keys and malformed values throw std::runtime_error.
ModelParams load_params(const std::filesystem::path& path, ModelParams base = {});
ModelParams parse_params_text(std::string_view text, ModelParams base = {});
ModelParams parse_params_json(std::string_view text, ModelParams base = {});

/// Apply one `key=value` override.
void set_param(ModelParams& params, std::string_view key, std::string_view value);

/// All recognised keys, in file order.
std::vector<std::string> param_keys();

/// Serialize in the key = value format.
std::string format_params(const ModelParams& params);

/// Environment variable naming the default parameter file.
inline constexpr const char* kParamsEnvVar = "PWADV_PARAMS";

/// Shipped defaults file location baked in at build time.
std::filesystem::path shipped_params_path();

/// Resolve parameters: an explicit path must exist; otherwise the env var
/// path, then the shipped file, then built-in defaults. `source` receives a
/// description of what was used.
ModelParams resolve_params(const std::optional<std::filesystem::path>& explicit_path, std::string* source = nullptr);

} // namespace pwadv
