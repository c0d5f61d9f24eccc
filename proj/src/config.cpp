#include "gn/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gn {

using nlohmann::json;

namespace {

json kernel_json(const Kernel& k) {
    json j;
    if (k.form() == Kernel::Form::power) {
        j["form"] = "power";
        j["p"] = k.exponent();
    } else {
        j["form"] = "table";
        j["values"] = k.values();
        j["tail_p"] = k.exponent();
    }
    return j;
}

Kernel kernel_parse(const json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "power") return Kernel::power(j.at("p").get<double>());
    if (form == "table")
        return Kernel::table(j.at("values").get<std::vector<double>>(),
                             j.at("tail_p").get<double>());
    throw std::invalid_argument("config: unknown kernel form '" + form + "'");
}

json stop_json(const StopRule& s) {
    json j;
    switch (s.kind) {
        case StopRule::Kind::births:
            j["rule"] = "births";
            j["m"] = s.births;
            break;
        case StopRule::Kind::wall_time:
            j["rule"] = "wall_time";
            j["t"] = s.time;
            break;
        case StopRule::Kind::near_explosion:
            j["rule"] = "near_explosion";
            j["delta"] = s.delta_rel;
            j["n_trunc"] = s.n_trunc;
            break;
    }
    return j;
}

StopRule stop_parse(const json& j) {
    const std::string rule = j.at("rule").get<std::string>();
    if (rule == "births") return StopRule::at_births(j.at("m").get<std::uint64_t>());
    if (rule == "wall_time") return StopRule::at_time(j.at("t").get<double>());
    if (rule == "near_explosion")
        return StopRule::near_explosion(j.value("delta", 1e-4),
                                        j.value("n_trunc", std::uint64_t{10'000}));
    throw std::invalid_argument("config: unknown stop rule '" + rule + "'");
}

}  // namespace

void RunConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (k_max < 1) throw std::invalid_argument("config: k_max must be >= 1");
    if (shape_cap < 1) throw std::invalid_argument("config: shape_cap must be >= 1");
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("config: checkpoints must be strictly ascending");
    if (stop.kind == StopRule::Kind::births && !checkpoints.empty() &&
        checkpoints.back() > stop.births)
        throw std::invalid_argument("config: checkpoints exceed the birth budget");
    if (stop.kind == StopRule::Kind::near_explosion && !kernel.is_explosive())
        throw std::invalid_argument("config: near_explosion requires an explosive kernel");
}

std::string RunConfig::to_json_string() const {
    json j;
    j["kernel"] = kernel_json(kernel);
    j["mode"] = embedded ? "embedded" : "discrete";
    j["stop"] = stop_json(stop);
    j["checkpoints"] = checkpoints;
    j["k_max"] = k_max;
    j["shape_cap"] = shape_cap;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    if (trace_births) j["trace_births"] = true;
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_string(const std::string& text) {
    const json j = json::parse(text);
    RunConfig c;
    c.kernel = kernel_parse(j.at("kernel"));
    const std::string mode = j.value("mode", "discrete");
    if (mode != "discrete" && mode != "embedded")
        throw std::invalid_argument("config: mode must be 'discrete' or 'embedded'");
    c.embedded = (mode == "embedded");
    if (j.contains("stop")) c.stop = stop_parse(j.at("stop"));
    c.checkpoints = j.value("checkpoints", std::vector<std::uint64_t>{});
    c.k_max = j.value("k_max", 4u);
    c.shape_cap = j.value("shape_cap", 2u);
    c.trials = j.value("trials", std::uint64_t{1});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.trace_births = j.value("trace_births", false);
    c.out_dir = j.value("out_dir", std::string{});
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << to_json_string();
}

std::string kernel_to_json(const Kernel& k) { return kernel_json(k).dump(); }

Kernel kernel_from_json(const std::string& text) { return kernel_parse(json::parse(text)); }

}  // namespace gn
