// qcorr: command-line front end for the generative-model comparison and
// the correlation demos. Every run is reproducible from its --seed and the
// emitted artifacts embed the full configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "qcorr/bbqc.hpp"
#include "qcorr/constructions.hpp"
#include "qcorr/data.hpp"
#include "qcorr/eval.hpp"
#include "qcorr/hmm.hpp"
#include "qcorr/linalg.hpp"

using namespace qcorr;
using nlohmann::json;

namespace {

// Artifacts written by the current command; removed when the command fails
// so interrupted runs never leave partial outputs behind.
std::vector<std::string> written_files;

void note_artifact(const std::string& path) { written_files.push_back(path); }

void remove_partial_outputs() {
    for (const auto& path : written_files) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
}

unsigned worker_count() {
    if (const char* env = std::getenv("QCORR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Run `count` independent jobs on up to QCORR_THREADS workers; results are
/// stored by index, so the outcome does not depend on the worker count.
template <typename Fn>
void run_trials(int count, Fn&& fn) {
    const unsigned workers = std::min<unsigned>(worker_count(), count);
    if (workers <= 1) {
        for (int t = 0; t < count; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= count) return;
                fn(t);
            }
        });
    }
    for (auto& th : pool) th.join();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
    note_artifact(path);
}

double hmm_nll_per_symbol(const hmm::Hmm& model, const data::Dataset& d) {
    double total = 0.0;
    for (const auto& seq : d.sequences) total -= hmm::forward_loglik(model, seq);
    return total / (static_cast<double>(d.sequences.size()) * d.n);
}

json run_config_json(const json& extra) {
    json j = extra;
    j["tool"] = "qcorr";
    return j;
}

struct TrialResult {
    double train_nll = 0.0;
    double test_nll = 0.0;
    std::string checkpoint;
};

struct CompareOptions {
    std::string data_path;
    std::string format = "generic-csv";
    std::string test_path;
    std::vector<int> bond_dims = {2, 4};
    double alpha = 1e-2;
    double beta = 0.5;
    int epochs = 150;
    int batch_size = 8;
    int trials = 10;
    double holdout = 0.25;
    std::uint64_t seed = 1;
    std::string out_prefix = "compare";
};

void cmd_compare(const CompareOptions& opt) {
    const auto format = data::parse_format(opt.format);
    const auto full = data::load_sequences(opt.data_path, format);
    data::Dataset train, test;
    if (!opt.test_path.empty()) {
        train = full;
        test = data::load_sequences(opt.test_path, format);
    } else {
        std::tie(train, test) = data::split(full, opt.holdout, opt.seed);
    }

    std::string fig7 = "k,model,split,trial,nll_per_symbol\n";
    std::string fig8 = "k,delta_kl,threshold_5sigma\n";
    json lr_all = json::array();
    json results = json::array();
    auto record = [&](int k, const char* model, const char* split, int trial, double nll) {
        fig7 += std::to_string(k) + "," + model + "," + split + "," + std::to_string(trial) + "," +
                std::to_string(nll) + "\n";
        results.push_back({{"model", model},
                           {"dataset", opt.data_path},
                           {"split", split},
                           {"k_or_h", k},
                           {"trial", trial},
                           {"nll_per_symbol", nll}});
    };

    for (int k : opt.bond_dims) {
        std::vector<TrialResult> qres(opt.trials), cres(opt.trials);
        run_trials(opt.trials, [&](int t) {
            RandomSource irng(RandomSource::mix(opt.seed, 10'000 + t));
            bbqc::TrainConfig cfg;
            cfg.alpha = opt.alpha;
            cfg.beta = opt.beta;
            cfg.epochs = opt.epochs;
            cfg.batch_size = opt.batch_size;
            cfg.seed = RandomSource::mix(opt.seed, 20'000 + t);
            auto [m, hist] = bbqc::train_bbqc(bbqc::random_bbqc(k, train.M, irng), train, cfg);
            m.validate(1e-9);  // exit-status gate: trained tensors stay unitary
            qres[t].train_nll = bbqc::nll_per_symbol(m, train);
            qres[t].test_nll = bbqc::nll_per_symbol(m, test);
        });
        run_trials(opt.trials, [&](int t) {
            RandomSource irng(RandomSource::mix(opt.seed, 30'000 + t));
            auto [m, hist] = hmm::train_hmm(hmm::random_hmm(k, train.M, irng), train, opt.epochs);
            m.validate(1e-9);
            cres[t].train_nll = hmm_nll_per_symbol(m, train);
            cres[t].test_nll = hmm_nll_per_symbol(m, test);
        });

        double best_q_train = 1e300, best_c_train = 1e300;
        for (int t = 0; t < opt.trials; ++t) {
            record(k, "bbqc", "train", t, qres[t].train_nll);
            record(k, "bbqc", "test", t, qres[t].test_nll);
            record(k, "hmm", "train", t, cres[t].train_nll);
            record(k, "hmm", "test", t, cres[t].test_nll);
            best_q_train = std::min(best_q_train, qres[t].train_nll);
            best_c_train = std::min(best_c_train, cres[t].train_nll);
        }

        const double symbols = static_cast<double>(train.sequences.size()) * train.n;
        const int df_alt = eval::dof_bbqc(k, train.M);
        const int df_null = eval::dof_hmm(k, train.M);
        const auto lr = eval::lr_test(-best_q_train * symbols, -best_c_train * symbols,
                                      df_alt, df_null);
        const double threshold = eval::kl_threshold_for_sigma(df_alt - df_null, 5.0,
                                                              train.sequences.size(), train.n);
        fig8 += std::to_string(k) + "," + std::to_string(best_c_train - best_q_train) + "," +
                std::to_string(threshold) + "\n";
        json entry = json::parse(lr.to_json());
        entry["k"] = k;
        entry["dataset"] = opt.data_path;
        lr_all.push_back(entry);
    }

    const json config = run_config_json({{"command", "compare"},
                                         {"data", opt.data_path},
                                         {"format", opt.format},
                                         {"test_data", opt.test_path},
                                         {"bond_dims", opt.bond_dims},
                                         {"alpha", opt.alpha},
                                         {"beta", opt.beta},
                                         {"epochs", opt.epochs},
                                         {"batch_size", opt.batch_size},
                                         {"trials", opt.trials},
                                         {"holdout", opt.holdout},
                                         {"seed", opt.seed}});
    write_text(opt.out_prefix + "_fig7.csv", "# " + config.dump() + "\n" + fig7);
    write_text(opt.out_prefix + "_fig8.csv", "# " + config.dump() + "\n" + fig8);
    json report;
    report["config"] = config;
    report["lr_tests"] = lr_all;
    report["results"] = results;
    write_text(opt.out_prefix + "_lr.json", report.dump(2) + "\n");
    std::printf("compare: wrote %s_fig7.csv, %s_fig8.csv, %s_lr.json\n", opt.out_prefix.c_str(),
                opt.out_prefix.c_str(), opt.out_prefix.c_str());
}

struct TrainOptions {
    std::string data_path;
    std::string format = "generic-csv";
    int size = 2;  // bond dimension or hidden-state count
    double alpha = 1e-2;
    double beta = 0.5;
    int epochs = 150;
    int batch_size = 8;
    int trials = 10;
    std::uint64_t seed = 1;
    std::string out = "model.json";
};

void cmd_train_bbqc(const TrainOptions& opt) {
    const auto train = data::load_sequences(opt.data_path, data::parse_format(opt.format));
    std::vector<double> nll(opt.trials, 1e300);
    std::vector<std::string> checkpoints(opt.trials);
    std::vector<std::vector<double>> histories(opt.trials);
    run_trials(opt.trials, [&](int t) {
        RandomSource irng(RandomSource::mix(opt.seed, 10'000 + t));
        bbqc::TrainConfig cfg;
        cfg.alpha = opt.alpha;
        cfg.beta = opt.beta;
        cfg.epochs = opt.epochs;
        cfg.batch_size = opt.batch_size;
        cfg.seed = RandomSource::mix(opt.seed, 20'000 + t);
        auto [m, hist] = bbqc::train_bbqc(bbqc::random_bbqc(opt.size, train.M, irng), train, cfg);
        m.validate(1e-9);
        nll[t] = hist.back();
        checkpoints[t] = m.to_json();
        histories[t] = hist;
    });
    const int best =
        static_cast<int>(std::min_element(nll.begin(), nll.end()) - nll.begin());
    const json config = run_config_json({{"command", "train-bbqc"},
                                         {"data", opt.data_path},
                                         {"format", opt.format},
                                         {"bond_dim", opt.size},
                                         {"alpha", opt.alpha},
                                         {"beta", opt.beta},
                                         {"epochs", opt.epochs},
                                         {"batch_size", opt.batch_size},
                                         {"trials", opt.trials},
                                         {"seed", opt.seed},
                                         {"best_trial", best}});
    json checkpoint = json::parse(checkpoints[best]);
    checkpoint["run_config"] = config;
    write_text(opt.out, checkpoint.dump());
    std::string csv = "# " + config.dump() + "\nepoch,split,nll_per_symbol\n";
    for (std::size_t e = 0; e < histories[best].size(); ++e) {
        csv += std::to_string(e) + ",train," + std::to_string(histories[best][e]) + "\n";
    }
    write_text(opt.out + ".history.csv", csv);
    std::printf("train-bbqc: best of %d trials nll/symbol %.6f -> %s\n", opt.trials, nll[best],
                opt.out.c_str());
}

void cmd_train_hmm(const TrainOptions& opt) {
    const auto train = data::load_sequences(opt.data_path, data::parse_format(opt.format));
    std::vector<double> nll(opt.trials, 1e300);
    std::vector<std::string> checkpoints(opt.trials);
    run_trials(opt.trials, [&](int t) {
        RandomSource irng(RandomSource::mix(opt.seed, 30'000 + t));
        auto [m, hist] = hmm::train_hmm(hmm::random_hmm(opt.size, train.M, irng), train, opt.epochs);
        m.validate(1e-9);
        nll[t] = hmm_nll_per_symbol(m, train);
        checkpoints[t] = m.to_json();
    });
    const int best =
        static_cast<int>(std::min_element(nll.begin(), nll.end()) - nll.begin());
    json checkpoint = json::parse(checkpoints[best]);
    checkpoint["run_config"] = run_config_json({{"command", "train-hmm"},
                                                {"data", opt.data_path},
                                                {"format", opt.format},
                                                {"hidden", opt.size},
                                                {"epochs", opt.epochs},
                                                {"trials", opt.trials},
                                                {"seed", opt.seed},
                                                {"best_trial", best}});
    write_text(opt.out, checkpoint.dump());
    std::printf("train-hmm: best of %d trials nll/symbol %.6f -> %s\n", opt.trials, nll[best],
                opt.out.c_str());
}

void cmd_gen_synth(const std::string& checkpoint_path, int count, int length, std::uint64_t seed,
                   const std::string& out) {
    std::ifstream in(checkpoint_path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + checkpoint_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const json j = json::parse(text);
    data::Dataset d;
    if (j.contains("U_t")) {
        d = data::synth_from_model(bbqc::BbqcModel::from_json(text), count, length, seed);
    } else {
        d = data::synth_from_model(hmm::Hmm::from_json(text), count, length, seed);
    }
    data::save_generic_csv(d, out);
    note_artifact(out);
    std::printf("gen-synth: wrote %zu sequences to %s\n", d.sequences.size(), out.c_str());
}

void cmd_demo_nonlocality(int pairs, int mid, const std::string& out) {
    if (mid < 0) {
        // even gaps on both sides need an odd interior position
        mid = pairs / 2;
        if (mid % 2 == 0) ++mid;
        mid = std::min(mid, pairs - 2);
    }
    const std::array<int, 3> signals = {0, mid, pairs - 1};
    const auto dist = qlab::cluster_distribution(pairs, signals, 0);

    bool support_ok = true;
    json support = json::array();
    for (int bs = 0; bs < 8; ++bs) {
        const std::array<int, 3> b = {(bs >> 0) & 1, (bs >> 1) & 1, (bs >> 2) & 1};
        if ((b[0] ^ b[1] ^ b[2]) != 0) continue;
        for (int ss = 0; ss < 8; ++ss) {
            const std::array<int, 3> s = {(ss >> 0) & 1, (ss >> 1) & 1, (ss >> 2) & 1};
            const bool populated = dist.conditional[bs * 8 + ss] > 1e-12;
            if (populated != qlab::ghz_constraint(b, s)) support_ok = false;
            if (populated) {
                support.push_back({{"b", b}, {"s", s}, {"q", dist.conditional[bs * 8 + ss]}});
            }
        }
    }
    const auto lhv = qlab::lhv_bruteforce();

    json report;
    report["construction"] = "ghz-embedded cluster chain, X/Y site measurements";
    report["parameters"] = {{"pairs", pairs}, {"signals", signals}, {"ancilla_outcome", 0}};
    report["verdict"] = {{"quantum_support_matches_constraint", support_ok},
                         {"lhv_max_contexts", lhv.max_contexts},
                         {"lhv_contexts_total", 4}};
    report["witness"] = {{"support", support},
                         {"lhv_best_strategy_f_of_b", lhv.best_strategy}};
    write_text(out, report.dump(2) + "\n");
    std::printf("demo-nonlocality: quantum support %s, LHV best %d/4 -> %s\n",
                support_ok ? "matches the GHZ constraint" : "VIOLATES expectations",
                lhv.max_contexts, out.c_str());
    if (!support_ok || lhv.max_contexts != 3) throw std::runtime_error("nonlocality demo failed");
}

void cmd_demo_contextuality(const std::string& out) {
    using qlab::PauliString;
    const qlab::StabTableau s1 = qlab::StabTableau::computational({0, 0});
    const qlab::StabTableau s2 = qlab::StabTableau::from_generators(
        {PauliString::from_label("XI"), PauliString::from_label("IX")});
    const qlab::StabTableau s3 = qlab::StabTableau::from_generators(
        {PauliString::from_label("XZ"), PauliString::from_label("ZX")});
    const auto square = qlab::find_magic_square(s1, s2, s3);
    if (!square || !qlab::magic_square_check(*square)) {
        throw std::runtime_error("contextuality demo: no magic square found");
    }
    json grid = json::array();
    for (const auto& row : *square) {
        json r = json::array();
        for (const auto& p : row) r.push_back(p.to_string());
        grid.push_back(r);
    }
    json counts;
    for (int n = 1; n <= 3; ++n) {
        counts[std::to_string(n)] = qlab::enumerate_stabilizer_states(n).count;
    }
    json report;
    report["construction"] = "Mermin-Peres square from |00>, |++>, CZ|++>";
    report["parameters"] = {{"qubits", 2}};
    report["verdict"] = {{"magic_square_found", true},
                         {"stabilizer_state_counts", counts}};
    report["witness"] = {{"square", grid}};
    write_text(out, report.dump(2) + "\n");
    std::printf("demo-contextuality: square found; counts 6/60/1080 -> %s\n", out.c_str());
}

void cmd_demo_walk(int max_k, const std::string& out) {
    std::string csv = "k,matrix_power,closed_form\n";
    bool ok = true;
    for (int k = 0; k <= max_k; ++k) {
        const double a = qlab::s3_walk_prob(k);
        const double b = qlab::s3_walk_closed_form(k);
        if (std::abs(a - b) > 1e-12) ok = false;
        csv += std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) + "\n";
        std::printf("  k=%2d  %.12f  (closed form %.12f)\n", k, a, b);
    }
    if (!out.empty()) write_text(out, csv);
    if (!ok) throw std::runtime_error("walk demo: matrix power disagrees with the closed form");
    std::printf("demo-walk: matrix power matches the closed form up to k=%d\n", max_k);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcorr: classical HMMs vs basis-enhanced 2-gram models, with correlation demos"};
    app.require_subcommand(1);

    CompareOptions cmp;
    auto* compare = app.add_subcommand("compare", "train both model families over a grid of k");
    compare->add_option("--data", cmp.data_path, "training data file")->required();
    compare->add_option("--format", cmp.format, "generic-csv | biofam | spect | promoter");
    compare->add_option("--test-data", cmp.test_path, "published test split (skips holdout)");
    compare->add_option("--bond-dims", cmp.bond_dims, "bond dimensions / hidden sizes")
        ->delimiter(',');
    compare->add_option("--alpha", cmp.alpha, "learning rate");
    compare->add_option("--beta", cmp.beta, "momentum coefficient");
    compare->add_option("--epochs", cmp.epochs, "training epochs");
    compare->add_option("--batch-size", cmp.batch_size, "mini-batch size");
    compare->add_option("--trials", cmp.trials, "independent trials per model");
    compare->add_option("--holdout", cmp.holdout, "holdout fraction when no test file");
    compare->add_option("--seed", cmp.seed, "master seed");
    compare->add_option("--out", cmp.out_prefix, "output prefix");

    TrainOptions tq;
    auto* train_bbqc = app.add_subcommand("train-bbqc", "train the basis-enhanced 2-gram model");
    train_bbqc->add_option("--data", tq.data_path)->required();
    train_bbqc->add_option("--format", tq.format);
    train_bbqc->add_option("--bond-dim", tq.size, "bond dimension k");
    train_bbqc->add_option("--alpha", tq.alpha);
    train_bbqc->add_option("--beta", tq.beta);
    train_bbqc->add_option("--epochs", tq.epochs);
    train_bbqc->add_option("--batch-size", tq.batch_size);
    train_bbqc->add_option("--trials", tq.trials);
    train_bbqc->add_option("--seed", tq.seed);
    train_bbqc->add_option("--out", tq.out);

    TrainOptions tc;
    auto* train_hmm_cmd = app.add_subcommand("train-hmm", "train the classical HMM baseline");
    train_hmm_cmd->add_option("--data", tc.data_path)->required();
    train_hmm_cmd->add_option("--format", tc.format);
    train_hmm_cmd->add_option("--hidden", tc.size, "hidden-state count h");
    train_hmm_cmd->add_option("--epochs", tc.epochs);
    train_hmm_cmd->add_option("--trials", tc.trials);
    train_hmm_cmd->add_option("--seed", tc.seed);
    train_hmm_cmd->add_option("--out", tc.out);

    std::string synth_checkpoint, synth_out = "synth.csv";
    int synth_count = 1000, synth_length = 16;
    std::uint64_t synth_seed = 1;
    auto* gen = app.add_subcommand("gen-synth", "sample sequences from a model checkpoint");
    gen->add_option("--model", synth_checkpoint, "model checkpoint json")->required();
    gen->add_option("--count", synth_count);
    gen->add_option("--length", synth_length);
    gen->add_option("--seed", synth_seed);
    gen->add_option("--out", synth_out);

    int nl_pairs = 7, nl_mid = -1;
    std::string nl_out = "nonlocality.json";
    auto* nl = app.add_subcommand("demo-nonlocality", "GHZ support vs local hidden variables");
    nl->add_option("--pairs", nl_pairs, "total chain pairs (3..14)");
    nl->add_option("--mid", nl_mid, "middle signal position (default pairs/2)");
    nl->add_option("--out", nl_out);

    std::string ctx_out = "contextuality.json";
    auto* ctx = app.add_subcommand("demo-contextuality", "Mermin-Peres square + state counts");
    ctx->add_option("--out", ctx_out);

    int walk_max = 12;
    std::string walk_out;
    auto* walk = app.add_subcommand("demo-walk", "S3 byproduct walk against the closed form");
    walk->add_option("--max-k", walk_max);
    walk->add_option("--out", walk_out, "optional CSV path");

    try {
        app.parse(argc, argv);
        // biofam protocol uses the gentler schedule unless overridden
        if (cmp.format == "biofam") {
            if (compare->count("--alpha") == 0) cmp.alpha = 1e-3;
            if (compare->count("--epochs") == 0) cmp.epochs = 75;
        }
        if (tq.format == "biofam") {
            if (train_bbqc->count("--alpha") == 0) tq.alpha = 1e-3;
            if (train_bbqc->count("--epochs") == 0) tq.epochs = 75;
        }
        if (compare->parsed()) cmd_compare(cmp);
        if (train_bbqc->parsed()) cmd_train_bbqc(tq);
        if (train_hmm_cmd->parsed()) cmd_train_hmm(tc);
        if (gen->parsed()) cmd_gen_synth(synth_checkpoint, synth_count, synth_length, synth_seed, synth_out);
        if (nl->parsed()) cmd_demo_nonlocality(nl_pairs, nl_mid, nl_out);
        if (ctx->parsed()) cmd_demo_contextuality(ctx_out);
        if (walk->parsed()) cmd_demo_walk(walk_max, walk_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        remove_partial_outputs();
        std::fprintf(stderr, "qcorr: %s\n", e.what());
        return 1;
    }
    return 0;
}
