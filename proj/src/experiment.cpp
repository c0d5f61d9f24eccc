#include "gn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gn/embed.hpp"
#include "gn/rng.hpp"

namespace gn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json report_json(const CensusReport& r) {
    json j;
    j["births"] = r.births;
    j["size"] = r.size;
    j["height"] = r.height;
    j["k_fertile"] = r.k_fertile;
    json dh = json::object();
    for (const auto& [deg, cnt] : r.degree_hist) dh[std::to_string(deg)] = cnt;
    j["degree_hist"] = dh;
    j["max_degree_label"] = r.max_degree_label;
    j["max_degree"] = r.max_degree;
    json inv = json::object();
    for (const auto& [shape, cnt] : r.child_inventory) inv[shape.code] = cnt;
    j["child_inventory"] = inv;
    j["children_beyond_cap"] = r.children_beyond_cap;
    j["detached_vertices"] = r.detached_vertices;
    return j;
}

json trajectory_json(const Trajectory& t) {
    json j;
    j["seed"] = t.seed;
    j["mode"] = t.mode;
    j["kernel"] = t.kernel;
    j["reports"] = json::array();
    for (const auto& r : t.reports) j["reports"].push_back(report_json(r));
    return j;
}

std::string trial_filename(std::uint64_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "trial_%05" PRIu64 ".json", i);
    return buf;
}

std::string trace_filename(std::uint64_t i) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "trial_%05" PRIu64 "_births.csv", i);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::uint64_t final_births(const RunConfig& c) {
    if (c.stop.kind == StopRule::Kind::births) return c.stop.births;
    if (!c.checkpoints.empty()) return c.checkpoints.back();
    throw std::invalid_argument("experiment: this stop rule needs explicit checkpoints");
}

std::vector<std::uint64_t> effective_checkpoints(const RunConfig& c) {
    if (!c.checkpoints.empty()) return c.checkpoints;
    return {final_births(c)};
}

}  // namespace

std::vector<Trajectory> run_ensemble(const RunConfig& config) {
    config.validate();
    const auto checkpoints = effective_checkpoints(config);
    std::vector<Trajectory> out(config.trials);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(hw, config.trials));
    auto work = [&](unsigned w) {
        for (std::uint64_t t = w; t < config.trials; t += workers) {
            out[t] = census_trajectory(config.kernel, config.embedded, checkpoints,
                                       config.k_max, config.shape_cap,
                                       trial_seed(config.master_seed, t));
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    return out;
}

namespace {

std::string census_csv(const std::vector<Trajectory>& trials, const RunConfig& config) {
    std::ostringstream os;
    os << "trial,births,size,height,max_degree,max_degree_label";
    for (std::uint32_t k = 1; k <= config.k_max; ++k) os << ",fertile_" << k;
    for (std::uint32_t s = 1; s <= config.shape_cap; ++s) os << ",child_subtrees_size_" << s;
    os << ",child_subtrees_larger,detached_vertices\n";
    for (std::size_t t = 0; t < trials.size(); ++t) {
        for (const auto& r : trials[t].reports) {
            os << t << ',' << r.births << ',' << r.size << ',' << r.height << ','
               << r.max_degree << ',' << (r.max_degree_label.empty() ? "root" : r.max_degree_label);
            for (std::uint32_t k = 1; k <= config.k_max; ++k) os << ',' << r.k_fertile[k - 1];
            for (std::uint32_t s = 1; s <= config.shape_cap; ++s) {
                std::uint64_t count = 0;
                for (const auto& [shape, cnt] : r.child_inventory)
                    if (shape.size == s) count += cnt;
                os << ',' << count;
            }
            os << ',' << r.children_beyond_cap << ',' << r.detached_vertices << '\n';
        }
    }
    return os.str();
}

json aggregate_json(const std::vector<Trajectory>& trials, const RunConfig& config) {
    const auto checkpoints = effective_checkpoints(config);
    json agg;
    agg["trials"] = trials.size();
    agg["checkpoints"] = checkpoints;

    json per_cp = json::array();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        json j;
        j["births"] = checkpoints[c];
        std::vector<double> mean_fertile(config.k_max, 0.0);
        double mean_maxdeg = 0.0, mean_height = 0.0;
        for (const auto& t : trials) {
            const auto& r = t.reports.at(c);
            for (std::uint32_t k = 0; k < config.k_max; ++k)
                mean_fertile[k] += static_cast<double>(r.k_fertile[k]);
            mean_maxdeg += r.max_degree;
            mean_height += r.height;
        }
        const double n = static_cast<double>(trials.size());
        for (auto& v : mean_fertile) v /= n;
        j["mean_k_fertile"] = mean_fertile;
        j["mean_max_degree"] = mean_maxdeg / n;
        j["mean_height"] = mean_height / n;
        per_cp.push_back(j);
    }
    agg["per_checkpoint"] = per_cp;

    // growth of ensemble means from first to last checkpoint, and per-seed
    // stabilization (count unchanged over the last two checkpoints)
    if (checkpoints.size() >= 2) {
        json growth = json::array();
        json stab = json::array();
        for (std::uint32_t k = 0; k < config.k_max; ++k) {
            double first = 0.0, last = 0.0;
            std::uint64_t stable = 0;
            for (const auto& t : trials) {
                first += static_cast<double>(t.reports.front().k_fertile[k]);
                last += static_cast<double>(t.reports.back().k_fertile[k]);
                const auto& a = t.reports[t.reports.size() - 2].k_fertile[k];
                const auto& b = t.reports.back().k_fertile[k];
                if (a == b) ++stable;
            }
            growth.push_back(first > 0.0 ? (last - first) / first
                                         : (last > 0.0 ? std::numeric_limits<double>::infinity()
                                                       : 0.0));
            stab.push_back(static_cast<double>(stable) / static_cast<double>(trials.size()));
        }
        agg["mean_growth"] = growth;
        agg["stabilization_fraction"] = stab;
    }
    return agg;
}

}  // namespace

std::vector<Trajectory> run_experiment(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root / "trials", ec);
    if (ec) throw std::runtime_error("cannot create output directory " + root.string());

    const auto trials = run_ensemble(config);

    json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = json::parse(config.to_json_string());
    manifest["timestamp_utc"] = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t t = 0; t < config.trials; ++t)
        seeds.push_back(trial_seed(config.master_seed, t));
    manifest["trial_seeds"] = seeds;
    const bool tracing = config.embedded && config.trace_births;
    json files = json::array();
    files.push_back("census.csv");
    files.push_back("aggregate.json");
    for (std::uint64_t t = 0; t < config.trials; ++t) {
        files.push_back("trials/" + trial_filename(t));
        if (tracing) files.push_back("trials/" + trace_filename(t));
    }
    manifest["files"] = files;
    write_text(root / "manifest.json", manifest.dump(2) + "\n");

    for (std::uint64_t t = 0; t < config.trials; ++t)
        write_text(root / "trials" / trial_filename(t), trajectory_json(trials[t]).dump(2) + "\n");
    if (tracing) {
        const std::uint64_t births = final_births(config);
        for (std::uint64_t t = 0; t < config.trials; ++t) {
            const auto run = run_embedded(config.kernel, StopRule::at_births(births),
                                          ClockSource(trial_seed(config.master_seed, t)));
            std::ostringstream os;
            write_birth_times_csv(os, run.tree, run.birth_times);
            write_text(root / "trials" / trace_filename(t), os.str());
        }
    }
    write_text(root / "census.csv", census_csv(trials, config));
    write_text(root / "aggregate.json", aggregate_json(trials, config).dump(2) + "\n");
    return trials;
}

void sweep(const std::vector<double>& p_values, const RunConfig& config_template,
           const std::string& out_dir) {
    for (double p : p_values)
        if (!(p > 1.0)) throw std::invalid_argument("sweep: all p must be > 1");

    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + root.string());

    std::ostringstream table;
    table << "p,k_p,k,stabilization_fraction,mean_count_first,mean_count_last\n";
    for (double p : p_values) {
        RunConfig c = config_template;
        c.kernel = Kernel::power(p);
        std::ostringstream dir;
        dir << "p_" << p;
        const auto trials = run_experiment(c, (root / dir.str()).string());
        const int kp = critical_k(p);
        for (std::uint32_t k = 1; k <= c.k_max; ++k) {
            std::uint64_t stable = 0;
            double first = 0.0, last = 0.0;
            for (const auto& t : trials) {
                if (t.reports.size() >= 2 &&
                    t.reports[t.reports.size() - 2].k_fertile[k - 1] ==
                        t.reports.back().k_fertile[k - 1])
                    ++stable;
                first += static_cast<double>(t.reports.front().k_fertile[k - 1]);
                last += static_cast<double>(t.reports.back().k_fertile[k - 1]);
            }
            const double n = static_cast<double>(trials.size());
            table << p << ',' << kp << ',' << k << ',' << (static_cast<double>(stable) / n) << ','
                  << (first / n) << ',' << (last / n) << '\n';
        }
    }
    write_text(root / "phase_table.csv", table.str());
}

void report(const std::string& artifact_dir) {
    const fs::path root(artifact_dir);
    std::ifstream mf(root / "manifest.json");
    if (!mf) throw std::runtime_error("report: missing manifest in " + artifact_dir);
    json manifest;
    try {
        mf >> manifest;
    } catch (const json::exception&) {
        throw std::runtime_error("report: corrupt manifest in " + artifact_dir);
    }

    const RunConfig config = RunConfig::from_json_string(manifest.at("config").dump());

    std::vector<json> trials;
    for (const auto& f : manifest.at("files")) {
        const std::string name = f.get<std::string>();
        if (name.rfind("trials/", 0) != 0) continue;
        std::ifstream tf(root / name);
        if (!tf) throw std::runtime_error("report: missing artifact " + name);
        json t;
        tf >> t;
        trials.push_back(std::move(t));
    }

    // pooled degree histogram at the final checkpoint
    std::map<std::uint64_t, std::uint64_t> degree_hist;
    std::map<std::string, std::uint64_t> inventory;
    for (const auto& t : trials) {
        if (t.at("reports").empty()) continue;
        const auto& last = t.at("reports").back();
        for (const auto& [deg, cnt] : last.at("degree_hist").items())
            degree_hist[std::stoull(deg)] += cnt.get<std::uint64_t>();
        for (const auto& [code, cnt] : last.at("child_inventory").items())
            inventory[code] += cnt.get<std::uint64_t>();
    }
    std::ostringstream dh;
    dh << "degree,count\n";
    for (const auto& [d, c] : degree_hist) dh << d << ',' << c << '\n';
    write_text(root / "degree_hist.csv", dh.str());

    std::ostringstream inv;
    inv << "shape_code,count\n";
    for (const auto& [code, c] : inventory) inv << '"' << code << "\"," << c << '\n';
    write_text(root / "shape_inventory.csv", inv.str());

    std::ostringstream sum;
    sum << "experiment report\n";
    sum << "version: " << manifest.at("version").get<std::string>() << "\n";
    sum << "kernel: " << config.kernel.describe() << "\n";
    sum << "mode: " << (config.embedded ? "embedded" : "discrete") << "\n";
    sum << "trials: " << trials.size() << "\n";
    if (trials.empty()) sum << "note: zero trials recorded\n";
    std::ifstream af(root / "aggregate.json");
    if (af) {
        json agg;
        af >> agg;
        sum << "checkpoints: " << agg.at("checkpoints").dump() << "\n";
        for (const auto& cp : agg.at("per_checkpoint")) {
            sum << "  m=" << cp.at("births").get<std::uint64_t>()
                << " mean_k_fertile=" << cp.at("mean_k_fertile").dump()
                << " mean_max_degree=" << cp.at("mean_max_degree").get<double>() << "\n";
        }
        if (agg.contains("stabilization_fraction"))
            sum << "stabilization_fraction: " << agg.at("stabilization_fraction").dump() << "\n";
    }
    write_text(root / "summary.txt", sum.str());
}

}  // namespace gn
