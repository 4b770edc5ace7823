// cytoclass command line: EDA, preprocessing, clustering, model training,
// evaluation, prediction, and the seeded end-to-end reproduction pipeline
// over UCI wdbc.data files. Files in, CSV/JSON files out.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cytoclass/cytoclass.hpp"

namespace fs = std::filesystem;
using namespace cyto;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

Dataset load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return load_wdbc(in);
}

ModelBundle load_bundle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open bundle file '" + path + "'");
    return load_bundle(in);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF on every platform
    if (!out) throw DataError("cannot open output file '" + path.string() + "'");
    return out;
}

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (c == ' ' || c == '/') c = '_';
    return s;
}

struct CommonOpts {
    std::string input;
    std::string out_dir = ".";
    long long seed = 0;
    std::size_t train_count = 448;
    double tau = 0.65;
    std::string pivot = "radius";
    bool with_cluster_feature = false;
    std::size_t max_depth = 5;
    std::size_t min_leaf = 5;
    double l2 = 1e-6;
    bool emit_rules = false;
};

void add_pipeline_flags(CLI::App* cmd, CommonOpts& o, bool with_model_flags = true) {
    cmd->add_option("--input", o.input, "UCI wdbc.data file")->required();
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "split / k-means seed");
    cmd->add_option("--train-count", o.train_count, "training partition size");
    cmd->add_option("--tau", o.tau, "correlation drop threshold");
    cmd->add_option("--pivot", o.pivot, "correlation pivot feature");
    if (with_model_flags) {
        cmd->add_flag("--with-cluster-feature", o.with_cluster_feature,
                      "feed the derived cluster attribute to the models");
        cmd->add_option("--max-depth", o.max_depth, "CART maximum depth");
        cmd->add_option("--min-leaf", o.min_leaf, "CART minimum leaf size");
        cmd->add_option("--l2", o.l2, "logistic ridge penalty");
        cmd->add_flag("--emit-rules", o.emit_rules, "write the CART rule listing");
    }
}

PipelineConfig to_config(const CommonOpts& o) {
    PipelineConfig cfg;
    cfg.seed = o.seed;
    cfg.train_count = o.train_count;
    cfg.tau = o.tau;
    cfg.pivot = o.pivot;
    cfg.with_cluster_feature = o.with_cluster_feature;
    cfg.cart.max_depth = o.max_depth;
    cfg.cart.min_leaf = o.min_leaf;
    cfg.logistic.l2 = o.l2;
    return cfg;
}

void write_outcome(const ModelOutcome& outcome, const fs::path& dir) {
    auto cm = open_out(dir / (outcome.name + "_confusion.csv"));
    csv::confusion_matrix(outcome.matrix, cm);
    auto rr = open_out(dir / (outcome.name + "_rates.csv"));
    csv::rate_report(outcome.report, rr);
}

void write_experiment(const ExperimentResult& r, const fs::path& dir, bool emit_rules) {
    fs::create_directories(dir);
    write_outcome(r.cart_outcome, dir);
    write_outcome(r.logistic_outcome, dir);
    write_outcome(r.ensemble_outcome, dir);

    auto cmp = open_out(dir / "comparison.csv");
    cmp << compare_models({{"cart", r.cart_outcome.report},
                           {"logistic", r.logistic_outcome.report},
                           {"ensemble", r.ensemble_outcome.report}});

    auto preds = open_out(dir / "ensemble_predictions.csv");
    csv::predictions(r.ensemble_predictions, preds);

    auto bundle = open_out(dir / "bundle.json");
    save_bundle(r.bundle, bundle);

    if (emit_rules) {
        auto rules = open_out(dir / "rules.txt");
        rules << r.rule_listing;
    }
}

int cmd_eda(const CommonOpts& o) {
    Dataset ds = load_input(o.input);
    fs::path dir(o.out_dir);
    fs::create_directories(dir);

    auto stats = open_out(dir / "stats.csv");
    csv::feature_stats(ds, 2.0, stats);

    auto outs = open_out(dir / "outliers.csv");
    csv::outliers(detect_outliers(ds), outs);

    auto corr = open_out(dir / "correlation.csv");
    csv::correlation(correlation_matrix(ds), corr);

    for (std::size_t j = 0; j < ds.width(); ++j) {
        auto hist = open_out(dir / ("hist_" + sanitize(ds.schema()[j]) + ".csv"));
        csv::histogram(ds.column(j), hist);
    }
    return kExitOk;
}

int cmd_preprocess(const CommonOpts& o) {
    Dataset ds = load_input(o.input);
    DataSplit split = train_test_split(ds, o.train_count, o.seed);
    MinMaxScaler scaler = MinMaxScaler::fit(split.train);
    Dataset train = scaler.transform(split.train);
    Dataset test = scaler.transform(split.test);
    DropRecommendation drops = recommend_drops(correlation_matrix(train), o.pivot, o.tau);
    auto retained = drops.retained(train.schema());

    fs::path dir(o.out_dir);
    fs::create_directories(dir);

    auto dropped = open_out(dir / "drops.csv");
    dropped << "feature,abs_r_to_pivot\n";
    for (const auto& [name, r] : drops.dropped) dropped << name << "," << csv::real(r) << "\n";

    auto emit = [&](const Dataset& part, const std::string& stem) {
        Dataset sel = select_features(part, retained);
        auto out = open_out(dir / (stem + ".csv"));
        out << "id,diagnosis";
        for (const auto& f : sel.schema()) out << "," << sanitize(f);
        out << "\n";
        for (const Sample& s : sel.samples()) {
            out << s.id << "," << diagnosis_code(s.diagnosis);
            for (double v : s.features) out << "," << csv::real(v);
            out << "\n";
        }
    };
    emit(train, "train");
    emit(test, "test");
    return kExitOk;
}

int cmd_cluster(const CommonOpts& o) {
    Dataset ds = load_input(o.input);
    DataSplit split = train_test_split(ds, o.train_count, o.seed);
    MinMaxScaler scaler = MinMaxScaler::fit(split.train);
    Dataset train = scaler.transform(split.train);

    KMeansParams kp;
    kp.seed = o.seed;
    KMeansModel m = kmeans_fit(train, kp);

    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    auto cent = open_out(dir / "centroids.csv");
    csv::centroids(m, train.schema(), cent);
    auto pur = open_out(dir / "purity.csv");
    csv::purity(cluster_purity(m, train), pur);
    auto imp = open_out(dir / "importance.csv");
    csv::importance(feature_importance(m, train), imp);
    return kExitOk;
}

int cmd_train(const CommonOpts& o) {
    Dataset ds = load_input(o.input);
    ExperimentResult r = run_pipeline(ds, to_config(o));
    write_experiment(r, fs::path(o.out_dir), o.emit_rules);
    if (o.emit_rules) std::cout << r.rule_listing;
    return kExitOk;
}

int cmd_evaluate(const CommonOpts& o, const std::string& bundle_path, const std::string& model) {
    Dataset ds = load_input(o.input);
    ModelBundle b = load_bundle_file(bundle_path);
    DataSplit split = train_test_split(ds, b.train_count, b.seed);
    Dataset test = prepare_features(b, split.test);

    fs::path dir(o.out_dir);
    fs::create_directories(dir);

    if (model == "ensemble") {
        EnsembleModel ens = make_ensemble(b.cart, b.logistic);
        auto preds = ensemble_evaluate(ens, test);
        std::vector<std::pair<Diagnosis, Diagnosis>> pairs;
        for (const auto& p : preds) pairs.emplace_back(p.actual, p.predicted.label);
        ConfusionMatrix cm = confusion(pairs);
        auto pf = open_out(dir / "ensemble_predictions.csv");
        csv::predictions(preds, pf);
        write_outcome({model, cm, rates(cm)}, dir);
    } else {
        auto predict = [&](std::span<const double> x) {
            if (model == "cart") return cart_predict(b.cart, x).label;
            return logit_predict(b.logistic, x).label;
        };
        write_outcome(evaluate_member(model, test, predict), dir);
    }
    return kExitOk;
}

int cmd_predict(const std::string& input, const std::string& bundle_path,
                const std::string& out_dir) {
    Dataset ds = load_input(input);
    ModelBundle b = load_bundle_file(bundle_path);
    Dataset prepared = prepare_features(b, ds);
    EnsembleModel ens = make_ensemble(b.cart, b.logistic);
    auto preds = ensemble_evaluate(ens, prepared);
    fs::path dir(out_dir);
    fs::create_directories(dir);
    auto out = open_out(dir / "predictions.csv");
    csv::predictions(preds, out);
    return kExitOk;
}

bool parse_seed_range(const std::string& spec, long long& lo, long long& hi) {
    const auto pos = spec.find("..");
    if (pos == std::string::npos) return false;
    try {
        lo = std::stoll(spec.substr(0, pos));
        hi = std::stoll(spec.substr(pos + 2));
    } catch (const std::exception&) {
        return false;
    }
    return lo <= hi;
}

int cmd_reproduce(const CommonOpts& o, const std::string& seeds) {
    Dataset ds = load_input(o.input);
    long long lo = o.seed, hi = o.seed;
    if (!seeds.empty() && !parse_seed_range(seeds, lo, hi))
        throw CLI::ValidationError("--seeds", "expected A..B with A <= B");

    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    auto summary = open_out(dir / "summary.csv");
    summary << "seed,cart_error,logistic_error,ensemble_error,cart_fn,logistic_fn,ensemble_fn\n";

    for (long long seed = lo; seed <= hi; ++seed) {
        PipelineConfig cfg = to_config(o);
        cfg.seed = seed;
        ExperimentResult r = run_pipeline(ds, cfg);
        const fs::path seed_dir = lo == hi ? dir : dir / ("seed_" + std::to_string(seed));
        write_experiment(r, seed_dir, true);
        summary << seed << "," << csv::real(r.cart_outcome.report.overall_error) << ","
                << csv::real(r.logistic_outcome.report.overall_error) << ","
                << csv::real(r.ensemble_outcome.report.overall_error) << ","
                << r.cart_outcome.matrix.fn() << "," << r.logistic_outcome.matrix.fn() << ","
                << r.ensemble_outcome.matrix.fn() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WDBC abnormality-detection pipeline"};
    app.require_subcommand(1);

    CommonOpts eda_o, pre_o, cluster_o, train_o, eval_o, repro_o;
    std::string bundle_path, model = "ensemble", predict_input, predict_out = ".", seeds;

    auto* eda = app.add_subcommand("eda", "descriptive statistics and screens");
    eda->add_option("--input", eda_o.input)->required();
    eda->add_option("--out", eda_o.out_dir);

    add_pipeline_flags(app.add_subcommand("preprocess", "split, scale, prune"), pre_o, false);
    add_pipeline_flags(app.add_subcommand("cluster", "two-cluster k-means reports"), cluster_o,
                       false);
    add_pipeline_flags(app.add_subcommand("train", "train CART, logistic, and ensemble"), train_o);

    auto* eval = app.add_subcommand("evaluate", "evaluate a saved bundle");
    eval->add_option("--input", eval_o.input)->required();
    eval->add_option("--out", eval_o.out_dir);
    eval->add_option("--bundle", bundle_path, "bundle.json path")->required();
    eval->add_option("--model", model, "cart | logistic | ensemble")
        ->check(CLI::IsMember({"cart", "logistic", "ensemble"}));

    auto* pred = app.add_subcommand("predict", "predict with a saved bundle");
    pred->add_option("--input", predict_input)->required();
    pred->add_option("--bundle", bundle_path)->required();
    pred->add_option("--out", predict_out);

    auto* repro = app.add_subcommand("reproduce", "end-to-end seeded reproduction");
    add_pipeline_flags(repro, repro_o);
    repro->add_option("--seeds", seeds, "seed range A..B for batch runs");

    try {
        app.parse(argc, argv);
        if (eda->parsed()) return cmd_eda(eda_o);
        if (app.get_subcommand("preprocess")->parsed()) return cmd_preprocess(pre_o);
        if (app.get_subcommand("cluster")->parsed()) return cmd_cluster(cluster_o);
        if (app.get_subcommand("train")->parsed()) return cmd_train(train_o);
        if (eval->parsed()) return cmd_evaluate(eval_o, bundle_path, model);
        if (pred->parsed()) return cmd_predict(predict_input, bundle_path, predict_out);
        if (repro->parsed()) return cmd_reproduce(repro_o, seeds);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
