#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subcount/counting.hpp"
#include "subcount/counterexample.hpp"
#include "subcount/datasets.hpp"
#include "subcount/errors.hpp"
#include "subcount/harness.hpp"
#include "subcount/lrp.hpp"
#include "subcount/parallel.hpp"
#include "subcount/pattern.hpp"
#include "subcount/rng.hpp"
#include "subcount/textio.hpp"
#include "subcount/wl.hpp"

namespace {

using namespace subcount;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Pattern parse_pattern_arg(const std::string& arg) {
    const std::string prefix = "builtin:";
    if (arg.rfind(prefix, 0) == 0) {
        std::string name = arg.substr(prefix.size());
        if (name == "triangle") return triangle_pattern();
        if (name == "3star") return star_pattern(4);
        const std::string path_prefix = "path:";
        if (name.rfind(path_prefix, 0) == 0) {
            int m = std::stoi(name.substr(path_prefix.size()));
            return path_pattern(m);
        }
        throw ValidationError("unknown builtin pattern: " + name);
    }
    return Pattern::from_graph(load_graph_file(arg));
}

std::vector<AttributedGraph> load_graphs_arg(const std::string& path) {
    if (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl") {
        std::ifstream f(path);
        if (!f) throw FileNotFound(path);
        std::vector<AttributedGraph> out;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            out.push_back(graph_from_json(line));
        }
        if (out.empty()) throw EmptySelection("no graphs in " + path);
        return out;
    }
    return {load_graph_file(path)};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open " + path + " for writing");
    f << content;
}

nlohmann::json histogram_json(const ColorHistogram& h) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [color, count] : h.classes)
        arr.push_back({{"color", color}, {"count", count}});
    return arr;
}

const char* verdict_str(WlVerdict v) {
    switch (v) {
        case WlVerdict::Distinguished:
            return "distinguished";
        case WlVerdict::IndistinguishableAfter:
            return "indistinguishable-after";
        case WlVerdict::IndistinguishableStable:
            return "indistinguishable-stable";
    }
    return "?";
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    std::int64_t budget = 200000;
};

int run_gen(const std::string& family, int count, const GlobalOpts& g, int m,
            double p, const std::string& out_dir) {
    if (!g.seed_given) throw ValidationError("gen requires --seed");
    const int threads = resolve_threads(g.threads);
    LabeledDataset ds;
    ds.meta.generator = family;
    ds.meta.seed = g.seed;
    ds.meta.count = count;
    if (family == "er") {
        ds.graphs = gen_erdos_renyi(count, m, p, g.seed, threads);
        nlohmann::json params = {{"m", m}, {"p", p}};
        ds.meta.params_json = params.dump();
    } else {
        ds.graphs =
            gen_random_regular(count, default_regular_configs(), g.seed, threads);
        nlohmann::json params = {
            {"configs", {{10, 6}, {15, 6}, {20, 5}, {30, 5}}},
            {"deleted_edges", "m"}};
        ds.meta.params_json = params.dump();
    }
    save_dataset_dir(out_dir, ds);
    std::cout << "wrote " << ds.graphs.size() << " " << family << " graphs to "
              << out_dir << "\n";
    return 0;
}

int run_label(const std::string& dir, const std::string& task,
              const GlobalOpts& g) {
    const int threads = resolve_threads(g.threads);
    LabeledDataset ds = load_dataset_dir(dir);
    DatasetMeta meta = ds.meta;
    meta.task = task;
    const bool star = task == "3star";
    LabeledDataset labeled = label_dataset(
        std::move(ds.graphs), star ? star_pattern(4) : triangle_pattern(),
        star ? CountMode::Containment : CountMode::Matching, meta, threads);
    save_dataset_dir(dir, labeled);
    std::cout << "labeled " << labeled.labels.size() << " graphs, task " << task
              << ", variance " << labeled.meta.variance << "\n";
    return 0;
}

int run_count(const std::string& graphs_path, const std::string& pattern_arg,
              const std::string& mode, const std::string& out_path,
              const GlobalOpts& g) {
    const int threads = resolve_threads(g.threads);
    Pattern p = parse_pattern_arg(pattern_arg);
    std::vector<AttributedGraph> graphs = load_graphs_arg(graphs_path);
    std::vector<std::uint64_t> counts(graphs.size());
    const bool containment = mode == "containment";
    parallel_for(graphs.size(), threads, [&](std::size_t i) {
        counts[i] = containment ? containment_count(graphs[i], p)
                                : matching_count(graphs[i], p);
    });
    std::ostringstream csv;
    csv << "graph_id,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        csv << i << "," << counts[i] << "\n";
    if (out_path.empty())
        std::cout << csv.str();
    else
        write_text_file(out_path, csv.str());
    return 0;
}

int run_wl(const std::string& g1_path, const std::string& g2_path, int k,
           const std::string& iters, const std::string& trace_path,
           const GlobalOpts& g) {
    AttributedGraph g1 = load_graph_file(g1_path);
    AttributedGraph g2 = load_graph_file(g2_path);
    std::optional<int> max_iters;
    if (iters != "stable") max_iters = std::stoi(iters);
    WlOptions opt;
    opt.tuple_budget = g.budget;
    DistinguishResult res = wl_refine_pair(g1, g2, k, max_iters, opt);
    std::cout << verdict_str(res.verdict) << " at iteration " << res.iteration
              << "\n";
    if (!trace_path.empty()) {
        nlohmann::json trace;
        trace["k"] = k;
        trace["verdict"] = verdict_str(res.verdict);
        trace["iteration"] = res.iteration;
        nlohmann::json h1 = nlohmann::json::array();
        for (const auto& h : res.history1) h1.push_back(histogram_json(h));
        nlohmann::json h2 = nlohmann::json::array();
        for (const auto& h : res.history2) h2.push_back(histogram_json(h));
        trace["history_g1"] = std::move(h1);
        trace["history_g2"] = std::move(h2);
        if (res.verdict == WlVerdict::Distinguished) {
            const ColorHistogram& a = res.history1.back();
            const ColorHistogram& b = res.history2.back();
            nlohmann::json only1 = nlohmann::json::array();
            nlohmann::json only2 = nlohmann::json::array();
            for (const auto& pr : a.classes)
                if (std::find(b.classes.begin(), b.classes.end(), pr) ==
                    b.classes.end())
                    only1.push_back({{"color", pr.first}, {"count", pr.second}});
            for (const auto& pr : b.classes)
                if (std::find(a.classes.begin(), a.classes.end(), pr) ==
                    a.classes.end())
                    only2.push_back({{"color", pr.first}, {"count", pr.second}});
            trace["first_diff"] = {{"iteration", res.iteration},
                                   {"only_in_g1", std::move(only1)},
                                   {"only_in_g2", std::move(only2)}};
        }
        write_text_file(trace_path, trace.dump(2) + "\n");
    }
    return 0;
}

int run_counterexample(const std::string& construction,
                       const std::string& pattern_arg, int k, int T, int m,
                       bool do_verify, const std::string& out_path,
                       const GlobalOpts& g) {
    CounterexamplePair cp;
    if (construction == "doubled") {
        if (pattern_arg.empty())
            throw ValidationError("doubled construction requires --pattern");
        cp = doubled_pattern_pair(parse_pattern_arg(pattern_arg));
    } else {
        cp = path_counterexample_pair(k, T, m);
    }
    nlohmann::json rep;
    rep["construction"] = construction;
    rep["pattern"] = nlohmann::json::parse(graph_to_json(cp.pattern.graph));
    rep["g1"] = nlohmann::json::parse(graph_to_json(cp.g1));
    rep["g2"] = nlohmann::json::parse(graph_to_json(cp.g2));
    rep["expected"] = {
        {"mode",
         cp.expected.mode == CountMode::Matching ? "matching" : "containment"},
        {"g1", cp.expected.count_g1},
        {"g2", cp.expected.count_g2}};
    if (construction == "path") {
        rep["k"] = cp.k;
        rep["T"] = cp.iterations;
        rep["m"] = m;
        rep["regime_ok"] = cp.regime_ok;
        if (!cp.regime_ok)
            std::cerr << "warning: m < (k+1)*2^T, outside the guaranteed regime\n";
    }
    bool pass = true;
    if (do_verify) {
        WlOptions opt;
        opt.tuple_budget = g.budget;
        const int wl_k = construction == "path" ? cp.k : 2;
        std::optional<int> iters;
        if (construction == "path") iters = cp.iterations;
        PairVerification v = verify_pair(cp, wl_k, iters, opt);
        rep["verification"] = {{"count_g1", v.count_g1},
                               {"count_g2", v.count_g2},
                               {"counts_match", v.counts_match},
                               {"wl_verdict", verdict_str(v.wl.verdict)},
                               {"wl_iteration", v.wl.iteration},
                               {"pass", v.pass}};
        pass = v.pass;
        std::cout << (pass ? "verified" : "FAILED") << ": counts "
                  << v.count_g1 << " vs " << v.count_g2 << ", wl "
                  << verdict_str(v.wl.verdict) << "\n";
    }
    if (!out_path.empty()) write_text_file(out_path, rep.dump(2) + "\n");
    return pass ? 0 : 1;
}

int run_train(const std::string& dir, const std::string& task,
              const std::string& model, int H, double lr, int epochs,
              int batch, const std::string& out_arg, const GlobalOpts& g) {
    if (!g.seed_given) throw ValidationError("train requires --seed");
    if (model != "lrp") throw ValidationError("only --model lrp is available");
    auto comma = out_arg.find(',');
    if (comma == std::string::npos)
        throw ValidationError("--out wants model.json,metrics.csv");
    const std::string model_path = out_arg.substr(0, comma);
    const std::string metrics_path = out_arg.substr(comma + 1);

    LabeledDataset ds = load_dataset_dir(dir);
    if (!ds.meta.labeled)
        throw ValidationError("dataset is unlabeled; run `label` first");
    if (ds.meta.task != task)
        throw ValidationError("dataset is labeled for task '" + ds.meta.task +
                              "', not '" + task + "'");
    const std::size_t n = ds.graphs.size();
    const int threads = resolve_threads(g.threads);

    FeatureToken max_node = 0, max_edge = 0;
    bool any_edge_token = false;
    for (const auto& gr : ds.graphs) {
        for (int v = 1; v <= gr.node_count(); ++v)
            max_node = std::max(max_node, gr.node_feature(v));
        for (const auto& [e, tok] : gr.edge_map()) {
            max_edge = std::max(max_edge, tok);
            any_edge_token = any_edge_token || tok != 0;
        }
    }
    LrpFeaturizeConfig fcfg;
    if (max_node > 0) fcfg.node_vocab = static_cast<int>(max_node) + 1;
    if (any_edge_token) fcfg.edge_vocab = static_cast<int>(max_edge) + 1;

    std::vector<LrpFeatures> feats(n);
    parallel_for(n, threads, [&](std::size_t i) {
        feats[i] = lrp_featurize(ds.graphs[i], fcfg);
    });
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = static_cast<double>(ds.labels[i]);

    SplitIndices split;
    if (!load_splits(dir, split)) {
        SplitSpec spec;
        spec.seed = g.seed;
        split = make_split(static_cast<int>(n), spec);
    }

    LrpConfig mcfg;
    mcfg.hidden = H;
    mcfg.channels = fcfg.channels();
    TrainConfig tcfg;
    tcfg.epochs = epochs;
    tcfg.lr = lr;
    tcfg.batch_size = batch;
    tcfg.seed = g.seed;
    TrainResult res =
        train_lrp(mcfg, tcfg, feats, labels, split.train, split.val, split.test);

    const double variance = ds.meta.variance;
    std::ostringstream csv;
    csv << "epoch,train_mse,val_mse,test_mse,test_mse_over_variance\n";
    for (const auto& st : res.history)
        csv << st.epoch << "," << st.train_mse << "," << st.val_mse << ","
            << st.test_mse << ","
            << (variance > 0 ? st.test_mse / variance : st.test_mse) << "\n";
    write_text_file(metrics_path, csv.str());

    nlohmann::json mj;
    mj["config"] = {{"hidden", res.best.cfg.hidden},
                    {"channels", res.best.cfg.channels}};
    mj["theta"] = res.best.theta;
    mj["best_epoch"] = res.best_epoch;
    mj["best_val_mse"] = res.best_val_mse;
    mj["test_mse_at_best"] = res.test_mse_at_best;
    mj["normalized_test_mse"] =
        variance > 0 ? res.test_mse_at_best / variance : res.test_mse_at_best;
    write_text_file(model_path, mj.dump(2) + "\n");

    std::cout << "best epoch " << res.best_epoch << ", val MSE "
              << res.best_val_mse << ", test MSE " << res.test_mse_at_best
              << ", normalized " << mj["normalized_test_mse"].get<double>()
              << "\n";
    return 0;
}

int run_verify(const std::string& which, const std::string& out_path,
               const GlobalOpts& g) {
    const int threads = resolve_threads(g.threads);
    const bool needs_seed = which == "thm1-empirical" || which == "star-cc" ||
                            which == "wl-bound" || which == "all";
    if (needs_seed && !g.seed_given)
        throw ValidationError("verify " + which + " requires --seed");

    std::vector<VerificationReport> reports;
    if (which == "thm2")
        reports.push_back(verify_thm2(threads));
    else if (which == "thm4")
        reports.push_back(verify_thm4(g.budget, threads));
    else if (which == "thm5")
        reports.push_back(verify_thm5(threads));
    else if (which == "thm1-empirical")
        reports.push_back(verify_thm1_empirical(g.seed, threads));
    else if (which == "star-cc")
        reports.push_back(verify_star_cc(g.seed, threads));
    else if (which == "wl-bound")
        reports.push_back(verify_wl_bound(g.seed, threads));
    else
        reports = verify_all(g.seed, g.budget, threads);

    bool all_pass = true;
    for (const auto& r : reports) {
        std::cout << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " ("
                  << r.checked << " instances, " << r.wall_seconds << " s)\n";
        if (!r.pass) {
            all_pass = false;
            for (const auto& inst : r.instances)
                if (!inst.pass) {
                    std::cout << "  first failure: " << inst.name << ": "
                              << inst.detail << "\n";
                    break;
                }
        }
    }
    if (!out_path.empty()) {
        if (reports.size() == 1) {
            write_text_file(out_path,
                            verification_report_json(reports[0]) + "\n");
        } else {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : reports)
                arr.push_back(nlohmann::json::parse(verification_report_json(r)));
            write_text_file(out_path, arr.dump(2) + "\n");
        }
    }
    return all_pass ? 0 : 1;
}

int run_reproduce(const std::string& row, const std::string& scale,
                  const std::string& out_path, const GlobalOpts& g) {
    if (!g.seed_given) throw ValidationError("reproduce requires --seed");
    const int threads = resolve_threads(g.threads);
    ExperimentReport rep = reproduce_row(row, scale, g.seed, threads);
    std::cout << rep.id << ": best normalized MSE " << rep.best_normalized
              << ", median " << rep.median_normalized << " (reference "
              << rep.reference << ", label variance " << rep.variance << ", "
              << rep.wall_seconds << " s)\n";
    if (!out_path.empty())
        write_text_file(out_path, experiment_report_json(rep) + "\n");
    return 0;
}

int run_report(const std::vector<std::string>& inputs,
               const std::string& csv_path, const std::string& json_path) {
    std::vector<std::string> texts;
    for (const auto& path : inputs) {
        std::ifstream f(path);
        if (!f) throw FileNotFound(path);
        std::ostringstream ss;
        ss << f.rdbuf();
        texts.push_back(ss.str());
    }
    MergedReports merged = merge_reports(texts);
    if (csv_path.empty())
        std::cout << merged.csv;
    else
        write_text_file(csv_path, merged.csv);
    if (!json_path.empty()) write_text_file(json_path, merged.json + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"substructure counting, refinement, and crop-pooling toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* seed_opt =
        app.add_option("--seed", g.seed, "root seed for all randomness");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
    app.add_option("--budget", g.budget, "tuple budget for refinement");

    auto* gen = app.add_subcommand("gen", "generate a random graph dataset");
    gen->fallthrough();
    std::string gen_family, gen_out;
    int gen_count = 0, gen_m = 10;
    double gen_p = 0.3;
    gen->add_option("--family", gen_family, "er or rr")
        ->required()
        ->check(CLI::IsMember({"er", "rr"}));
    gen->add_option("--count", gen_count, "number of graphs")->required();
    gen->add_option("--out", gen_out, "output dataset directory")->required();
    gen->add_option("--m", gen_m, "nodes per graph (er)");
    gen->add_option("--p", gen_p, "edge probability (er)");

    auto* label = app.add_subcommand("label", "attach ground-truth counts");
    label->fallthrough();
    std::string label_dir, label_task;
    label->add_option("--dataset", label_dir, "dataset directory")->required();
    label->add_option("--task", label_task, "triangle or 3star")
        ->required()
        ->check(CLI::IsMember({"triangle", "3star"}));

    auto* count = app.add_subcommand("count", "count a pattern in graphs");
    count->fallthrough();
    std::string count_graphs, count_pattern, count_mode = "matching",
                count_out;
    count->add_option("--graphs", count_graphs, "graph file (.jsonl for many)")
        ->required();
    count
        ->add_option("--pattern", count_pattern,
                     "pattern file or builtin:triangle|3star|path:m")
        ->required();
    count->add_option("--mode", count_mode, "matching or containment")
        ->check(CLI::IsMember({"matching", "containment"}));
    count->add_option("--out", count_out, "CSV output path (default stdout)");

    auto* wl = app.add_subcommand("wl", "compare two graphs by refinement");
    wl->fallthrough();
    std::string wl_g1, wl_g2, wl_iters = "stable", wl_trace;
    int wl_k = 2;
    wl->add_option("--g1", wl_g1, "first graph file")->required();
    wl->add_option("--g2", wl_g2, "second graph file")->required();
    wl->add_option("--k", wl_k, "refinement order");
    wl->add_option("--iters", wl_iters, "iteration count or 'stable'");
    wl->add_option("--trace", wl_trace, "write per-iteration trace JSON");

    auto* cex = app.add_subcommand(
        "counterexample", "build a count-divergent indistinguishable pair");
    cex->fallthrough();
    std::string cex_construction, cex_pattern, cex_out;
    int cex_k = 2, cex_T = 1, cex_m = 6;
    bool cex_verify = false;
    cex->add_option("--construction", cex_construction, "doubled or path")
        ->required()
        ->check(CLI::IsMember({"doubled", "path"}));
    cex->add_option("--pattern", cex_pattern,
                    "pattern file or builtin (doubled)");
    cex->add_option("--k", cex_k, "refinement order (path)");
    cex->add_option("--T", cex_T, "iteration budget (path)");
    cex->add_option("--m", cex_m, "path length (path)");
    cex->add_flag("--verify", cex_verify, "recount and rerun refinement");
    cex->add_option("--out", cex_out, "report JSON path");

    auto* train = app.add_subcommand("train", "train the crop-pooling model");
    train->fallthrough();
    std::string train_dir, train_task, train_model = "lrp",
                train_out = "model.json,metrics.csv";
    int train_H = 16, train_epochs = 100, train_batch = 32;
    double train_lr = 0.1;
    train->add_option("--dataset", train_dir, "labeled dataset directory")
        ->required();
    train->add_option("--task", train_task, "triangle or 3star")
        ->required()
        ->check(CLI::IsMember({"triangle", "3star"}));
    train->add_option("--model", train_model, "model kind (lrp)");
    train->add_option("--H", train_H, "hidden width");
    train->add_option("--lr", train_lr, "learning rate");
    train->add_option("--epochs", train_epochs, "training epochs");
    train->add_option("--batch", train_batch, "minibatch size");
    train->add_option("--out", train_out, "model.json,metrics.csv");

    auto* verify = app.add_subcommand("verify", "run a verification sweep");
    verify->fallthrough();
    std::string verify_which, verify_out;
    verify
        ->add_option("which", verify_which,
                     "thm2|thm4|thm5|thm1-empirical|star-cc|wl-bound|all")
        ->required()
        ->check(CLI::IsMember({"thm2", "thm4", "thm5", "thm1-empirical",
                               "star-cc", "wl-bound", "all"}));
    verify->add_option("--out", verify_out, "report JSON path");

    auto* reproduce =
        app.add_subcommand("reproduce", "run a published-table row");
    reproduce->fallthrough();
    std::string rep_row, rep_scale = "desk", rep_out;
    reproduce->add_option("--row", rep_row, "which row")
        ->required()
        ->check(CLI::IsMember({"lrp-er-triangle", "lrp-er-3star",
                               "lrp-rr-triangle", "lrp-rr-3star"}));
    reproduce->add_option("--scale", rep_scale, "desk (1000) or paper (5000)")
        ->check(CLI::IsMember({"desk", "paper"}));
    reproduce->add_option("--out", rep_out, "report JSON path");

    auto* report = app.add_subcommand("report", "merge report JSON files");
    report->fallthrough();
    std::vector<std::string> report_inputs;
    std::string report_csv, report_json;
    report->add_option("--inputs", report_inputs, "report files")
        ->required()
        ->expected(-1);
    report->add_option("--csv", report_csv, "merged CSV path (default stdout)");
    report->add_option("--json", report_json, "merged JSON path");

    try {
        app.parse(argc, argv);
        g.seed_given = seed_opt->count() > 0;
        if (*gen)
            return run_gen(gen_family, gen_count, g, gen_m, gen_p, gen_out);
        if (*label) return run_label(label_dir, label_task, g);
        if (*count)
            return run_count(count_graphs, count_pattern, count_mode,
                             count_out, g);
        if (*wl) return run_wl(wl_g1, wl_g2, wl_k, wl_iters, wl_trace, g);
        if (*cex)
            return run_counterexample(cex_construction, cex_pattern, cex_k,
                                      cex_T, cex_m, cex_verify, cex_out, g);
        if (*train)
            return run_train(train_dir, train_task, train_model, train_H,
                             train_lr, train_epochs, train_batch, train_out, g);
        if (*verify) return run_verify(verify_which, verify_out, g);
        if (*reproduce) return run_reproduce(rep_row, rep_scale, rep_out, g);
        if (*report) return run_report(report_inputs, report_csv, report_json);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const SizeLimitExceeded& e) {
        std::cerr << "size limit: " << e.what() << "\n";
        return 3;
    } catch (const PatternTooLarge& e) {
        std::cerr << "pattern limit: " << e.what() << "\n";
        return 3;
    } catch (const GenerationFailure& e) {
        std::cerr << "generation failure: " << e.what() << "\n";
        return 3;
    } catch (const OverflowError& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
