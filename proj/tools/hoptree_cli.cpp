// Command-line front end for the hoptree shared library. Everything goes
// through the C API in hoptree.h; this translation unit deliberately does
// not include the C++ core headers.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hoptree.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

struct InstanceDeleter {
    void operator()(ht_instance* p) const { ht_instance_free(p); }
};
struct ModelDeleter {
    void operator()(ht_model* p) const { ht_model_free(p); }
};
struct LpDeleter {
    void operator()(ht_lp_result* p) const { ht_lp_result_free(p); }
};
struct MipDeleter {
    void operator()(ht_mip_result* p) const { ht_mip_result_free(p); }
};

using InstancePtr = std::unique_ptr<ht_instance, InstanceDeleter>;
using ModelPtr = std::unique_ptr<ht_model, ModelDeleter>;
using LpPtr = std::unique_ptr<ht_lp_result, LpDeleter>;
using MipPtr = std::unique_ptr<ht_mip_result, MipDeleter>;

[[noreturn]] void die(const std::string& message, int code = kExitUsage) {
    std::cerr << "error: " << message << "\n";
    std::exit(code);
}

void require_ok(ht_status status, const std::string& context) {
    if (status != HT_OK) die(context + ": " + ht_last_error());
}

double default_time_limit() {
    if (const char* env = std::getenv("HOPTREE_TIME_LIMIT")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            die("HOPTREE_TIME_LIMIT is not a number");
        }
    }
    return 60.0;
}

ht_problem_kind parse_problem(const std::string& name) {
    if (name == "hmstp") return HT_PROBLEM_HMSTP;
    if (name == "hstp") return HT_PROBLEM_HSTP;
    if (name == "stprbh") return HT_PROBLEM_STPRBH;
    die("unknown problem '" + name + "' (expected hmstp, hstp or stprbh)");
}

ht_model_kind parse_model(const std::string& name) {
    if (name == "a" || name == "A") return HT_MODEL_A;
    if (name == "p" || name == "P") return HT_MODEL_P;
    die("unknown model '" + name + "' (expected a or p)");
}

// "2..10" or "2,5,7"
std::vector<int> parse_hops(const std::string& text) {
    std::vector<int> out;
    try {
        const auto dots = text.find("..");
        if (dots != std::string::npos) {
            const int lo = std::stoi(text.substr(0, dots));
            const int hi = std::stoi(text.substr(dots + 2));
            if (lo < 0 || hi < lo) die("bad --hops range '" + text + "'");
            for (int h = lo; h <= hi; ++h) out.push_back(h);
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    } catch (const std::exception&) {
        die("bad --hops value '" + text + "'");
    }
    if (out.empty()) die("empty --hops list");
    return out;
}

std::string format_value(double v, bool full_precision) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), full_precision ? "%.17g" : "%.2f", v);
    return buf;
}

// Instance prepared for one problem kind: hmstp widens terminals, hstp
// derives the half-terminal set when the file had all nodes as terminals.
InstancePtr instance_for_problem(const ht_instance* base, ht_problem_kind problem) {
    ht_instance* out = nullptr;
    switch (problem) {
        case HT_PROBLEM_HMSTP:
            require_ok(ht_instance_with_all_terminals(base, &out), "preparing instance");
            break;
        case HT_PROBLEM_HSTP:
            if (ht_instance_terminal_count(base) == ht_instance_node_count(base))
                require_ok(ht_instance_derive_hstp_terminals(base, &out),
                           "deriving hstp terminals");
            else
                require_ok(ht_instance_with_hop(base, ht_instance_hop_limit(base), &out),
                           "copying instance");
            break;
        default:
            require_ok(ht_instance_with_hop(base, ht_instance_hop_limit(base), &out),
                       "copying instance");
            break;
    }
    return InstancePtr(out);
}

int run_generate(const std::string& family, int n, std::uint64_t seed, int grid,
                 std::pair<int, int> cost_range, int hop, bool hstp_terminals,
                 std::string out_path) {
    ht_instance* raw = nullptr;
    if (family == "tc")
        require_ok(ht_instance_generate_euclidean(n, seed, grid, &raw), "generate");
    else if (family == "tr")
        require_ok(ht_instance_generate_random(n, seed, cost_range.first, cost_range.second, &raw),
                   "generate");
    else
        die("unknown family '" + family + "' (expected tc or tr)");
    InstancePtr inst(raw);

    if (hop >= 0) {
        ht_instance* capped = nullptr;
        require_ok(ht_instance_with_hop(inst.get(), hop, &capped), "setting hop limit");
        inst.reset(capped);
    }
    if (hstp_terminals) {
        ht_instance* derived = nullptr;
        require_ok(ht_instance_derive_hstp_terminals(inst.get(), &derived), "deriving terminals");
        inst.reset(derived);
    }
    if (out_path.empty())
        out_path = family + std::to_string(n) + "_s" + std::to_string(seed) + ".inst";
    require_ok(ht_instance_write_file(inst.get(), out_path.c_str()), "writing " + out_path);
    std::cout << out_path << "\n";
    return kExitOk;
}

int run_solve(const std::string& path, const std::string& problem_name,
              const std::string& model_name, int hop, bool lp_only, double time_limit,
              const std::string& cuts, const std::string& export_path) {
    ht_instance* raw = nullptr;
    require_ok(ht_instance_read_file(path.c_str(), &raw), "reading " + path);
    InstancePtr file_inst(raw);
    if (hop >= 0) {
        ht_instance* capped = nullptr;
        require_ok(ht_instance_with_hop(file_inst.get(), hop, &capped), "setting hop limit");
        file_inst.reset(capped);
    }
    const ht_problem_kind problem = parse_problem(problem_name);
    const ht_model_kind kind = parse_model(model_name);
    InstancePtr inst = instance_for_problem(file_inst.get(), problem);

    ht_model* raw_model = nullptr;
    require_ok(ht_model_build(inst.get(), kind, problem, &raw_model), "building model");
    ModelPtr model(raw_model);

    std::cout << "instance " << path << "  n=" << ht_instance_node_count(inst.get())
              << " H=" << ht_instance_hop_limit(inst.get()) << "  problem " << problem_name
              << "  model " << (kind == HT_MODEL_A ? "A" : "P") << "\n";
    std::cout << "variables " << ht_model_variable_count(model.get()) << "  constraints "
              << ht_model_constraint_count(model.get()) << "\n";

    if (!export_path.empty()) {
        require_ok(ht_model_export_lp(model.get(), export_path.c_str()),
                   "exporting " + export_path);
        std::cout << "lp file written to " << export_path << "\n";
    }

    ht_lp_result* raw_lp = nullptr;
    require_ok(ht_solve_lp(model.get(), &raw_lp), "solving relaxation");
    LpPtr lp(raw_lp);
    if (ht_lp_result_status(lp.get()) == HT_LP_INFEASIBLE) {
        std::cout << "relaxation infeasible\n";
        return kExitOk;
    }
    if (ht_lp_result_status(lp.get()) != HT_LP_OPTIMAL)
        die("relaxation did not solve to optimality", 1);
    std::printf("lp %.6f  (iterations %d)\n", ht_lp_result_objective(lp.get()),
                ht_lp_result_iterations(lp.get()));

    if (cuts == "root-walk") {
        double value = 0.0;
        int added = 0;
        require_ok(ht_root_cut_loop(model.get(), 100, &value, &added), "root cut loop");
        std::printf("root cut loop: %d cut(s), lp %.6f\n", added, value);
        if (kind == HT_MODEL_P && added > 0) {
            std::cerr << "invariant violation: walk cuts separated on the threshold model\n";
            return 1;
        }
    } else if (!cuts.empty()) {
        die("unknown --cuts scheme '" + cuts + "'");
    }

    if (lp_only) return kExitOk;

    ht_mip_result* raw_mip = nullptr;
    require_ok(ht_solve_mip(model.get(), time_limit, &raw_mip), "branch and bound");
    MipPtr mip(raw_mip);
    switch (ht_mip_result_status(mip.get())) {
        case HT_MIP_OPTIMAL:
            std::printf("ip %.6f  (optimal, %ld nodes, %.2fs)\n",
                        ht_mip_result_incumbent(mip.get()), ht_mip_result_nodes(mip.get()),
                        ht_mip_result_wall_seconds(mip.get()));
            break;
        case HT_MIP_INFEASIBLE:
            std::cout << "ip infeasible\n";
            return kExitOk;
        case HT_MIP_TIME_LIMIT:
        case HT_MIP_FEASIBLE:
            if (ht_mip_result_has_incumbent(mip.get()))
                std::printf("ip interval [%.6f, %.6f]  (time limit, %ld nodes, %.2fs)\n",
                            ht_mip_result_bound(mip.get()), ht_mip_result_incumbent(mip.get()),
                            ht_mip_result_nodes(mip.get()),
                            ht_mip_result_wall_seconds(mip.get()));
            else
                std::printf("ip unresolved, dual bound %.6f  (time limit)\n",
                            ht_mip_result_bound(mip.get()));
            return kExitOk;
    }

    const int count = ht_mip_result_tree_arcs(mip.get(), nullptr, 0);
    if (count >= 0) {
        std::vector<int> pairs(2 * std::max(count, 1));
        ht_mip_result_tree_arcs(mip.get(), pairs.data(), count);
        std::cout << "tree arcs:";
        for (int i = 0; i < count; ++i)
            std::cout << ' ' << pairs[2 * i] << "->" << pairs[2 * i + 1];
        std::cout << "\n";
    }
    return kExitOk;
}

struct CompareJob {
    std::string name;
    ht_problem_kind problem;
    std::string problem_name;
    int hop = 0;
    ht_model_kind kind = HT_MODEL_A;
    const ht_instance* base = nullptr;
};

struct CompareResult {
    bool lp_ok = false;
    double lp = 0.0;
    std::string status;
    std::optional<double> incumbent;
    std::optional<double> bound;
    double seconds = 0.0;
    int n = 0;
};

CompareResult run_compare_job(const CompareJob& job, bool lp_only, double time_limit) {
    CompareResult res;
    InstancePtr prepared = instance_for_problem(job.base, job.problem);
    ht_instance* capped = nullptr;
    require_ok(ht_instance_with_hop(prepared.get(), job.hop, &capped), "setting hop limit");
    InstancePtr inst(capped);
    res.n = ht_instance_node_count(inst.get());

    ht_model* raw_model = nullptr;
    require_ok(ht_model_build(inst.get(), job.kind, job.problem, &raw_model), "building model");
    ModelPtr model(raw_model);

    ht_lp_result* raw_lp = nullptr;
    require_ok(ht_solve_lp(model.get(), &raw_lp), "solving relaxation");
    LpPtr lp(raw_lp);
    if (ht_lp_result_status(lp.get()) == HT_LP_OPTIMAL) {
        res.lp_ok = true;
        res.lp = ht_lp_result_objective(lp.get());
    } else if (ht_lp_result_status(lp.get()) == HT_LP_INFEASIBLE) {
        res.status = "infeasible";
        return res;
    } else {
        res.status = "lpfail";
        return res;
    }
    if (lp_only) {
        res.status = "lponly";
        return res;
    }

    ht_mip_result* raw_mip = nullptr;
    require_ok(ht_solve_mip(model.get(), time_limit, &raw_mip), "branch and bound");
    MipPtr mip(raw_mip);
    res.seconds = ht_mip_result_wall_seconds(mip.get());
    switch (ht_mip_result_status(mip.get())) {
        case HT_MIP_OPTIMAL: res.status = "optimal"; break;
        case HT_MIP_FEASIBLE: res.status = "feasible"; break;
        case HT_MIP_INFEASIBLE: res.status = "infeasible"; break;
        case HT_MIP_TIME_LIMIT: res.status = "timelimit"; break;
    }
    if (ht_mip_result_has_incumbent(mip.get()))
        res.incumbent = ht_mip_result_incumbent(mip.get());
    if (ht_mip_result_status(mip.get()) != HT_MIP_INFEASIBLE)
        res.bound = ht_mip_result_bound(mip.get());
    return res;
}

int run_compare(const std::string& dir, const std::string& hops_text,
                const std::string& problems_text, double time_limit, const std::string& out_path,
                bool lp_only, bool full_precision, int jobs) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) die("--instances must name a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename().string().front() != '.')
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) die("no instance files in " + dir);

    const std::vector<int> hops = parse_hops(hops_text);
    std::vector<std::pair<ht_problem_kind, std::string>> problems;
    {
        std::stringstream ss(problems_text);
        std::string item;
        while (std::getline(ss, item, ',')) problems.emplace_back(parse_problem(item), item);
        if (problems.empty()) die("empty --problems list");
    }

    std::vector<InstancePtr> bases;
    std::vector<std::string> names;
    for (const std::string& file : files) {
        ht_instance* raw = nullptr;
        require_ok(ht_instance_read_file(file.c_str(), &raw), "reading " + file);
        bases.emplace_back(raw);
        names.push_back(fs::path(file).stem().string());
    }

    // A/P pairs stay adjacent so the summary can walk records two at a time.
    std::vector<CompareJob> queue;
    for (std::size_t f = 0; f < bases.size(); ++f)
        for (const auto& [problem, problem_name] : problems)
            for (int hop : hops)
                for (ht_model_kind kind : {HT_MODEL_A, HT_MODEL_P})
                    queue.push_back(
                        CompareJob{names[f], problem, problem_name, hop, kind, bases[f].get()});

    std::vector<CompareResult> results(queue.size());
    const int workers = std::max(1, jobs);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < queue.size(); i = next.fetch_add(1))
                results[i] = run_compare_job(queue[i], lp_only, time_limit);
        });
    for (std::thread& t : pool) t.join();

    std::ostream* out = &std::cout;
    std::ofstream file_out;
    if (!out_path.empty()) {
        file_out.open(out_path);
        if (!file_out) die("cannot open " + out_path + " for writing");
        out = &file_out;
    }

    *out << "instance,problem,H,model,lp,status,incumbent,bound,time_s\n";
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const CompareJob& job = queue[i];
        const CompareResult& res = results[i];
        *out << job.name << ',' << job.problem_name << ',' << job.hop << ','
             << (job.kind == HT_MODEL_A ? 'A' : 'P') << ',';
        if (res.lp_ok) *out << format_value(res.lp, full_precision);
        *out << ',' << res.status << ',';
        if (res.incumbent) *out << format_value(*res.incumbent, full_precision);
        *out << ',';
        if (res.bound) *out << format_value(*res.bound, full_precision);
        *out << ',' << format_value(res.seconds, full_precision) << "\n";
    }

    struct Cell {
        double mean_gap_a = 0.0, mean_gap_p = 0.0;
        int counted = 0, instances = 0;
    };
    std::map<std::pair<int, int>, Cell> cells;  // keyed by (n, H)
    std::map<int, int> strict_by_hop, pairs_by_hop;
    for (std::size_t i = 0; i + 1 < queue.size(); i += 2) {
        const CompareJob& job_a = queue[i];
        const CompareResult& res_a = results[i];
        const CompareResult& res_p = results[i + 1];
        if (!res_a.lp_ok || !res_p.lp_ok) continue;
        const bool maximize = job_a.problem == HT_PROBLEM_STPRBH;
        ++pairs_by_hop[job_a.hop];
        const bool strict = maximize ? res_p.lp < res_a.lp - 1e-6 : res_p.lp > res_a.lp + 1e-6;
        if (strict) ++strict_by_hop[job_a.hop];

        std::optional<double> best;  // best incumbent across both models
        for (const CompareResult* r : {&res_a, &res_p})
            if (r->incumbent &&
                (!best || (maximize ? *r->incumbent > *best : *r->incumbent < *best)))
                best = *r->incumbent;
        Cell& cell = cells[{res_a.n, job_a.hop}];
        ++cell.instances;
        if (best && std::abs(*best) > 1e-12) {
            cell.mean_gap_a += maximize ? (res_a.lp - *best) / *best : (*best - res_a.lp) / *best;
            cell.mean_gap_p += maximize ? (res_p.lp - *best) / *best : (*best - res_p.lp) / *best;
            ++cell.counted;
        }
    }
    // The summary rides along as comment lines so the CSV stays parseable.
    *out << "# gap-summary\n";
    *out << "# n,H,mean_gap_A,mean_gap_P,records,with_gap\n";
    for (const auto& [key, cell] : cells) {
        *out << "# " << key.first << ',' << key.second << ',';
        if (cell.counted) {
            *out << format_value(cell.mean_gap_a / cell.counted, true) << ','
                 << format_value(cell.mean_gap_p / cell.counted, true);
        } else {
            *out << ',';
        }
        *out << ',' << cell.instances << ',' << cell.counted << "\n";
    }
    *out << "# strict-dominance\n";
    for (const auto& [hop, pairs] : pairs_by_hop)
        *out << "# H=" << hop << ",strict=" << strict_by_hop[hop] << ",of=" << pairs << "\n";
    return kExitOk;
}

int run_certify(int n, int hop, std::uint64_t seed, const std::string& problem_name,
                const std::string& terminals, const std::string& direction_name, int trials,
                std::size_t row_cap) {
    ht_instance* raw = nullptr;
    require_ok(ht_instance_generate_random(n, seed, 1, 10, &raw), "generate");
    InstancePtr inst(raw);
    ht_instance* capped = nullptr;
    require_ok(ht_instance_with_hop(inst.get(), hop, &capped), "setting hop limit");
    inst.reset(capped);
    if (terminals == "half") {
        ht_instance* derived = nullptr;
        require_ok(ht_instance_derive_hstp_terminals(inst.get(), &derived), "deriving terminals");
        inst.reset(derived);
    } else if (terminals != "all") {
        die("unknown --terminals mode '" + terminals + "' (expected all or half)");
    }

    const ht_problem_kind problem = parse_problem(problem_name);
    ht_direction direction = HT_DIRECTION_AP;
    if (direction_name == "pa")
        direction = HT_DIRECTION_PA;
    else if (direction_name != "ap")
        die("unknown --direction '" + direction_name + "' (expected ap or pa)");

    ht_inclusion_verdict verdict;
    double worst_slack = 0.0;
    int rows = 0;
    require_ok(ht_certify_inclusion(inst.get(), problem, direction, row_cap, &verdict,
                                    &worst_slack, &rows),
               "certification");
    switch (verdict) {
        case HT_INCLUDED:
            std::printf("Included  (%d projected rows checked, worst slack %.3g)\n", rows,
                        worst_slack);
            break;
        case HT_COUNTEREXAMPLE:
            std::printf("CounterexampleFound  (%d rows checked, worst slack %.3g)\n", rows,
                        worst_slack);
            break;
        case HT_INCONCLUSIVE:
            std::printf("Inconclusive  (projection exceeded %zu rows)\n", row_cap);
            return kExitInconclusive;
    }

    double margin = 0.0;
    require_ok(ht_support_dominance(inst.get(), problem, trials, seed, &margin),
               "support sampling");
    std::printf("support margin over %d directions: worst %.6g\n", trials, margin);
    return kExitOk;
}

int run_export(const std::string& path, const std::string& problem_name,
               const std::string& model_name, int hop, const std::string& out_path) {
    ht_instance* raw = nullptr;
    require_ok(ht_instance_read_file(path.c_str(), &raw), "reading " + path);
    InstancePtr file_inst(raw);
    if (hop >= 0) {
        ht_instance* capped = nullptr;
        require_ok(ht_instance_with_hop(file_inst.get(), hop, &capped), "setting hop limit");
        file_inst.reset(capped);
    }
    const ht_problem_kind problem = parse_problem(problem_name);
    InstancePtr inst = instance_for_problem(file_inst.get(), problem);
    ht_model* raw_model = nullptr;
    require_ok(ht_model_build(inst.get(), parse_model(model_name), problem, &raw_model),
               "building model");
    ModelPtr model(raw_model);
    require_ok(ht_model_export_lp(model.get(), out_path.c_str()), "exporting " + out_path);
    std::cout << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hop-constrained tree models: build, solve, compare, certify"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "write a benchmark-style instance file");
    std::string family;
    int gen_n = 0;
    std::uint64_t gen_seed = 1;
    int grid = 100;
    std::pair<int, int> cost_range{1, 100};
    int gen_hop = -1;
    bool hstp_terminals = false;
    std::string gen_out;
    generate->add_option("--family", family, "tc (euclidean) or tr (uniform random)")->required();
    generate->add_option("--n", gen_n, "node count")->required()->check(CLI::Range(2, 1000));
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--grid", grid, "coordinate grid size (tc)");
    generate->add_option("--cost-range", cost_range, "min max edge cost (tr)");
    generate->add_option("--hop", gen_hop, "hop limit to store (default n-1)");
    generate->add_flag("--hstp-terminals", hstp_terminals,
                       "terminals = first half of the nodes plus the root");
    generate->add_option("--out", gen_out, "output path (default <family><n>_s<seed>.inst)");

    auto* solve = app.add_subcommand("solve", "solve one instance with one model");
    std::string solve_instance, solve_problem, solve_model, solve_cuts, solve_export;
    int solve_hop = -1;
    bool lp_only = false;
    double time_limit = default_time_limit();
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--problem", solve_problem, "hmstp, hstp or stprbh")->required();
    solve->add_option("--model", solve_model, "a or p")->required();
    solve->add_option("--hop", solve_hop, "override the instance hop limit");
    solve->add_flag("--lp-only", lp_only, "stop after the relaxation");
    solve->add_option("--time-limit", time_limit, "branch-and-bound limit in seconds");
    solve->add_option("--cuts", solve_cuts, "root-walk: separate walk cuts at the root LP");
    solve->add_option("--export-lp", solve_export, "also write the model in LP format");

    auto* compare = app.add_subcommand("compare", "sweep instances/hops and emit a CSV report");
    std::string cmp_dir, cmp_hops = "2..10", cmp_problems = "hmstp,hstp", cmp_out;
    double cmp_time_limit = default_time_limit();
    bool cmp_lp_only = false;
    int cmp_jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string precision = "2";
    compare->add_option("--instances", cmp_dir, "directory of instance files")->required();
    compare->add_option("--hops", cmp_hops, "hop sweep, e.g. 2..10 or 2,5,7");
    compare->add_option("--problems", cmp_problems, "comma list of hmstp,hstp,stprbh");
    compare->add_option("--time-limit", cmp_time_limit, "per-solve limit in seconds");
    compare->add_option("--out", cmp_out, "CSV path (default stdout)");
    compare->add_flag("--lp-only", cmp_lp_only, "skip branch and bound");
    compare->add_option("--precision", precision, "2 (default) or full");
    compare->add_option("--jobs", cmp_jobs, "worker threads");

    auto* certify = app.add_subcommand("certify", "exact x-space projection certificates");
    int cert_n = 4, cert_hop = 2, cert_trials = 20;
    std::uint64_t cert_seed = 1;
    std::string cert_problem = "hstp", cert_terminals = "all", cert_direction = "ap";
    std::size_t row_cap = 200000;
    certify->add_option("--n", cert_n, "node count")->check(CLI::Range(3, 5));
    certify->add_option("--hop", cert_hop, "hop limit")->check(CLI::Range(1, 3));
    certify->add_option("--seed", cert_seed, "instance seed");
    certify->add_option("--problem", cert_problem, "hmstp, hstp or stprbh");
    certify->add_option("--terminals", cert_terminals, "all or half");
    certify->add_option("--direction", cert_direction,
                        "ap: one-hot shadow must contain threshold shadow; pa: reverse");
    certify->add_option("--trials", cert_trials, "support sampling directions");
    certify->add_option("--row-cap", row_cap, "projection row cap");

    auto* export_cmd = app.add_subcommand("export", "write a model in LP format");
    std::string exp_instance, exp_problem, exp_model, exp_out;
    int exp_hop = -1;
    export_cmd->add_option("--instance", exp_instance, "instance file")->required();
    export_cmd->add_option("--problem", exp_problem, "hmstp, hstp or stprbh")->required();
    export_cmd->add_option("--model", exp_model, "a or p")->required();
    export_cmd->add_option("--hop", exp_hop, "override the instance hop limit");
    export_cmd->add_option("--out", exp_out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    if (generate->parsed())
        return run_generate(family, gen_n, gen_seed, grid, cost_range, gen_hop, hstp_terminals,
                            gen_out);
    if (solve->parsed())
        return run_solve(solve_instance, solve_problem, solve_model, solve_hop, lp_only,
                         time_limit, solve_cuts, solve_export);
    if (compare->parsed())
        return run_compare(cmp_dir, cmp_hops, cmp_problems, cmp_time_limit, cmp_out, cmp_lp_only,
                           precision == "full", cmp_jobs);
    if (certify->parsed())
        return run_certify(cert_n, cert_hop, cert_seed, cert_problem, cert_terminals,
                           cert_direction, cert_trials, row_cap);
    if (export_cmd->parsed())
        return run_export(exp_instance, exp_problem, exp_model, exp_hop, exp_out);
    return kExitUsage;
}
