// gnlab: experiment runner for the super-linear growing-network lab.
//
// Subcommands: simulate, census, sweep, embed-equiv, lemma-check, report.
// All runs are deterministic given (--config, --seed); relative --out paths
// resolve against $GNLAB_OUT_ROOT when it is set.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gn/census.hpp"
#include "gn/config.hpp"
#include "gn/experiment.hpp"
#include "gn/oracles.hpp"
#include "gn/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_out(const std::string& out) {
    if (out.empty()) return out;
    fs::path p(out);
    if (p.is_absolute()) return out;
    if (const char* root = std::getenv("GNLAB_OUT_ROOT")) return (fs::path(root) / p).string();
    return out;
}

gn::RunConfig config_from_cli(const std::string& config_path, double p, const std::string& mode,
                              std::uint64_t births, std::uint64_t trials, std::uint64_t seed,
                              const std::vector<std::uint64_t>& checkpoints, std::uint32_t k_max,
                              bool have_p, bool have_mode, bool have_births, bool have_trials,
                              bool have_seed, bool have_checkpoints, bool have_k) {
    gn::RunConfig c;
    if (!config_path.empty()) c = gn::RunConfig::load(config_path);
    if (have_p) c.kernel = gn::Kernel::power(p);
    if (have_mode) c.embedded = (mode == "embedded");
    if (have_births) c.stop = gn::StopRule::at_births(births);
    if (have_trials) c.trials = trials;
    if (have_seed) c.master_seed = seed;
    if (have_checkpoints) c.checkpoints = checkpoints;
    if (have_k) c.k_max = k_max;
    if (c.checkpoints.empty() && c.stop.kind == gn::StopRule::Kind::births)
        c.checkpoints = {c.stop.births};
    c.validate();
    return c;
}

json bound_check_json(const gn::BoundCheckResult& r, const std::string& what, double p,
                      std::uint64_t k, std::uint64_t n_trunc, std::uint64_t seed,
                      std::uint64_t trials) {
    json j;
    j["check"] = what;
    j["p"] = p;
    if (k) j["k"] = k;
    j["n"] = r.n;
    j["trials"] = trials;
    j["n_trunc"] = n_trunc;
    j["seed"] = seed;
    j["empirical"] = r.empirical;
    j["bound_shape"] = r.bound_shape;
    j["ratio"] = r.bound_shape > 0.0 ? r.empirical / r.bound_shape : 0.0;
    j["std_error"] = r.std_error;
    j["truncation_bias"] = r.truncation_bias;
    j["vacuous"] = r.vacuous;
    return j;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    const std::string path = resolve_out(out);
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growing-network simulation and verification lab"};
    app.require_subcommand(1);

    std::string config_path, mode = "discrete", out, tree_path, dir, which = "all";
    double p = 2.0, alpha = 0.001, delta = 0.0;
    std::uint64_t births = 1000, trials = 1, seed = 1, n_trunc = 10'000, n = 64, m_equiv = 6;
    std::uint32_t k_max = 4, k = 1, j_max = 10;
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> p_values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run config");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--trials", trials, "ensemble size");
        cmd->add_option("--out", out, "output path (resolved against $GNLAB_OUT_ROOT)");
        cmd->add_option("--mode", mode, "discrete|embedded")
            ->check(CLI::IsMember({"discrete", "embedded"}));
        cmd->add_option("--p", p, "power-kernel exponent");
        cmd->add_option("--k", k_max, "census depth k_max");
    };

    auto* sim = app.add_subcommand("simulate", "run an ensemble and write artifacts");
    add_common(sim);
    sim->add_option("--births", births, "stop after this many births");
    sim->add_option("--checkpoints", checkpoints, "census checkpoints (births)");

    auto* cen = app.add_subcommand("census", "census a serialized tree");
    cen->add_option("--tree", tree_path, "parent-array tree file")->required();
    cen->add_option("--k", k_max, "census depth k_max");
    cen->add_option("--shape-cap", k, "inventory size cap");
    cen->add_option("--out", out, "output path");

    auto* sw = app.add_subcommand("sweep", "census trajectories across p values");
    add_common(sw);
    sw->add_option("--births", births, "stop after this many births");
    sw->add_option("--checkpoints", checkpoints, "census checkpoints (births)");
    sw->add_option("--p-values", p_values, "kernel exponents to sweep")->required();

    auto* eq = app.add_subcommand("embed-equiv", "discrete vs embedded shape-law test");
    add_common(eq);
    eq->add_option("--births", m_equiv, "births per run");
    eq->add_option("--alpha", alpha, "significance level");

    auto* lc = app.add_subcommand("lemma-check", "Monte Carlo lemma oracles");
    add_common(lc);
    lc->add_option("--which", which, "erlang|fertility|lgdev|interbirth|all");
    lc->add_option("--n", n, "suffix start index");
    lc->add_option("--fertility-k", k, "children before explosion");
    lc->add_option("--delta", delta, "deviation (0 = n^{3/4-p})");
    lc->add_option("--n-trunc", n_trunc, "suffix truncation");
    lc->add_option("--j-max", j_max, "inter-birth indices to check");

    auto* rep = app.add_subcommand("report", "summarize an artifact directory");
    rep->add_option("--dir", dir, "artifact directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const auto cfg = config_from_cli(
                config_path, p, mode, births, trials, seed, checkpoints, k_max,
                sim->count("--p") > 0, sim->count("--mode") > 0, sim->count("--births") > 0,
                sim->count("--trials") > 0, sim->count("--seed") > 0,
                sim->count("--checkpoints") > 0, sim->count("--k") > 0);
            const std::string target = resolve_out(out.empty() ? "gnlab_run" : out);
            gn::run_experiment(cfg, target);
            std::cout << "wrote " << target << "\n";
        } else if (cen->parsed()) {
            std::ifstream in(tree_path);
            if (!in) throw std::runtime_error("cannot open " + tree_path);
            const auto tree = gn::LabelledTree::read_parent_array(in);
            const auto r = gn::census(tree, tree.size() - 1, k_max, std::max(k, 1u));
            json j;
            j["births"] = r.births;
            j["size"] = r.size;
            j["height"] = r.height;
            j["k_fertile"] = r.k_fertile;
            j["max_degree"] = r.max_degree;
            j["max_degree_label"] = r.max_degree_label;
            emit(out, j.dump(2) + "\n");
        } else if (sw->parsed()) {
            const auto cfg = config_from_cli(
                config_path, p, mode, births, trials, seed, checkpoints, k_max,
                false, sw->count("--mode") > 0, sw->count("--births") > 0,
                sw->count("--trials") > 0, sw->count("--seed") > 0,
                sw->count("--checkpoints") > 0, sw->count("--k") > 0);
            const std::string target = resolve_out(out.empty() ? "gnlab_sweep" : out);
            gn::sweep(p_values, cfg, target);
            std::cout << "wrote " << target << "\n";
        } else if (eq->parsed()) {
            const auto kernel = gn::Kernel::power(p);
            const auto discrete = gn::shape_ensemble(kernel, false, m_equiv, trials, seed);
            const auto embedded =
                gn::shape_ensemble(kernel, true, m_equiv, trials, gn::mix64(seed ^ 0xE1ull));
            const auto r = gn::chi_square_homogeneity(discrete, embedded);
            json j;
            j["births"] = m_equiv;
            j["p"] = p;
            j["trials_per_mode"] = trials;
            j["statistic"] = r.statistic;
            j["p_value"] = r.p_value;
            j["categories"] = r.categories;
            j["alpha"] = alpha;
            j["equivalent"] = r.p_value > alpha;
            emit(out, j.dump(2) + "\n");
            return r.p_value > alpha ? 0 : 1;
        } else if (lc->parsed()) {
            const auto kernel = gn::Kernel::power(p);
            json records = json::array();
            if (which == "erlang" || which == "all") {
                json j;
                j["check"] = "erlang_tail";
                json grid = json::array();
                for (std::uint32_t kk = 1; kk <= 5; ++kk)
                    for (double lam : {0.5, 1.0, 2.0, 5.0}) {
                        json g;
                        g["k"] = kk;
                        g["lambda"] = lam;
                        g["value"] = gn::erlang_tail(kk, lam);
                        grid.push_back(g);
                    }
                j["grid"] = grid;
                records.push_back(j);
            }
            if (which == "fertility" || which == "all") {
                const auto r = gn::mc_fertility_bound(n, k, kernel, trials, n_trunc, seed);
                records.push_back(bound_check_json(r, "mc_fertility_bound", p, k, n_trunc, seed,
                                                   trials));
            }
            if (which == "lgdev" || which == "all") {
                const double d =
                    delta > 0.0 ? delta : std::pow(static_cast<double>(n), 0.75 - p);
                auto r = gn::lgdev_tail_check(n, kernel, d, trials, n_trunc, seed);
                auto j = bound_check_json(r, "lgdev_tail_check", p, 0, n_trunc, seed, trials);
                j["delta"] = d;
                records.push_back(j);
            }
            if (which == "interbirth" || which == "all") {
                const auto checks = gn::interbirth_dominance_check(kernel, j_max, trials, seed);
                json j;
                j["check"] = "interbirth_dominance";
                j["p"] = p;
                j["trials"] = trials;
                json per = json::array();
                for (const auto& c : checks) {
                    json cj;
                    cj["j"] = c.j;
                    cj["rate"] = c.rate;
                    cj["dominated"] = c.dominated;
                    cj["max_excess_sigmas"] = c.max_excess_sigmas;
                    per.push_back(cj);
                }
                j["per_j"] = per;
                records.push_back(j);
            }
            emit(out, records.dump(2) + "\n");
        } else if (rep->parsed()) {
            gn::report(dir);
            std::cout << "wrote report into " << dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
