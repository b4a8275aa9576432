#include "pwadv/params.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace pwadv {

namespace {

using ParamRef = std::variant<double*, std::int64_t*, std::uint64_t*>;

struct ParamEntry {
    std::string key;
    ParamRef ref;
};

std::vector<ParamEntry> entries(ModelParams& p)
{
    auto& k = p.system.kernel;
    std::vector<ParamEntry> e{
        {"pipeline.column.depth", &p.column_pipeline.depth},
        {"pipeline.column.ii", &p.column_pipeline.ii},
        {"pipeline.column.clock_hz", &p.column_pipeline.clock_hz},
        {"pipeline.column.elements", &p.column_elements},
        {"pipeline.batched.depth", &p.batched_pipeline.depth},
        {"pipeline.batched.ii", &p.batched_pipeline.ii},
        {"pipeline.batched.clock_hz", &p.batched_pipeline.clock_hz},
        {"pipeline.batched.elements", &p.batched_elements},
        {"pipeline.extracted.depth", &p.extracted_pipeline.depth},
        {"pipeline.extracted.ii", &p.extracted_pipeline.ii},
        {"pipeline.extracted.clock_hz", &p.extracted_pipeline.clock_hz},
        {"pipeline.retimed.synth_clock_hz", &p.retimed_synth_clock_hz},
        {"kernel.depth", &k.pipeline.depth},
        {"kernel.ii", &k.pipeline.ii},
        {"kernel.clock_hz", &k.pipeline.clock_hz},
        {"kernel.y_batch", &k.y_batch},
        {"kernel.controllers", &k.controllers},
        {"memory.arrays_per_xstep", &k.memory.arrays_per_xstep},
        {"memory.eff_bandwidth_1", &k.memory.eff_bandwidth_1},
        {"memory.contention", &k.memory.contention},
        {"memory.burst_bytes", &k.memory.burst_bytes},
        {"memory.outstanding", &k.memory.outstanding},
    };
    for (Topology t : kTopologies) {
        const std::string base = "dma." + std::string(to_string(t));
        e.push_back({base + ".bytes", &p.system.dma.at(t).bytes});
        e.push_back({base + ".seconds", &p.system.dma.at(t).seconds});
    }
    e.push_back({"dma.end_to_end_bandwidth", &p.system.dma.end_to_end_bandwidth});
    e.push_back({"flops.adds_per_cell", &p.system.flops.adds_per_cell});
    e.push_back({"flops.muls_per_cell", &p.system.flops.muls_per_cell});
    return e;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(value))
        throw std::runtime_error("parameter '" + std::string(key) + "': cannot parse '" + s + "' as a number");
    return value;
}

template <class Int>
Int to_integer(std::string_view key, double value)
{
    if (value != std::floor(value) || value < static_cast<double>(std::numeric_limits<Int>::min()) ||
        value > static_cast<double>(std::numeric_limits<Int>::max()))
        throw std::runtime_error("parameter '" + std::string(key) + "' must be an integer");
    return static_cast<Int>(value);
}

void assign(std::string_view key, const ParamRef& ref, double value)
{
    std::visit(
        [&](auto* target) {
            using T = std::remove_pointer_t<decltype(target)>;
            if constexpr (std::is_same_v<T, double>)
                *target = value;
            else
                *target = to_integer<T>(key, value);
        },
        ref);
}

void set_number(ModelParams& params, std::string_view key, double value)
{
    for (auto& e : entries(params)) {
        if (e.key == key) {
            assign(key, e.ref, value);
            return;
        }
    }
    throw std::runtime_error("unknown parameter key '" + std::string(key) + "'");
}

void flatten(const nlohmann::json& j, const std::string& prefix, ModelParams& params)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "." + k, params);
        return;
    }
    if (!j.is_number())
        throw std::runtime_error("parameter '" + prefix + "' must be a number");
    set_number(params, prefix, j.get<double>());
}

} // namespace

void set_param(ModelParams& params, std::string_view key, std::string_view value)
{
    set_number(params, trim(key), parse_number(key, value));
}

ModelParams parse_params_text(std::string_view text, ModelParams base)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        set_param(base, content.substr(0, eq), std::string_view(content).substr(eq + 1));
    }
    return base;
}

ModelParams parse_params_json(std::string_view text, ModelParams base)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("invalid JSON parameter file: ") + e.what());
    }
    if (!j.is_object())
        throw std::runtime_error("JSON parameter file must hold an object");
    flatten(j, "", base);
    return base;
}

ModelParams load_params(const std::filesystem::path& path, ModelParams base)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open parameter file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (path.extension() == ".json")
        return parse_params_json(buffer.str(), std::move(base));
    return parse_params_text(buffer.str(), std::move(base));
}

std::vector<std::string> param_keys()
{
    ModelParams p;
    std::vector<std::string> keys;
    for (const auto& e : entries(p))
        keys.push_back(e.key);
    return keys;
}

std::string format_params(const ModelParams& params)
{
    ModelParams copy = params;
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& e : entries(copy)) {
        out << e.key << " = ";
        std::visit([&](auto* v) { out << *v; }, e.ref);
        out << '\n';
    }
    return out.str();
}

std::filesystem::path shipped_params_path()
{
#ifdef PWADV_DEFAULT_PARAMS_FILE
    return PWADV_DEFAULT_PARAMS_FILE;
#else
    return {};
#endif
}

ModelParams resolve_params(const std::optional<std::filesystem::path>& explicit_path, std::string* source)
{
    auto note = [&](std::string s) {
        if (source)
            *source = std::move(s);
    };
    if (explicit_path) {
        note(explicit_path->string());
        return load_params(*explicit_path);
    }
    if (const char* env = std::getenv(kParamsEnvVar); env && *env) {
        if (std::filesystem::exists(env)) {
            note(env);
            return load_params(env);
        }
    }
    const auto shipped = shipped_params_path();
    if (!shipped.empty() && std::filesystem::exists(shipped)) {
        note(shipped.string());
        return load_params(shipped);
    }
    note("built-in defaults");
    return {};
}

} // namespace pwadv
