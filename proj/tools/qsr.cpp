// Command-line front end: simulate observations, inspect difference
// sequences, run the structural checks, recover amplitudes, and drive the
// randomized property harness.
//
// Exit codes: 0 ok, 1 violation or error, 2 identical inputs,
// 3 inconsistent inputs, 4 regime unsupported (partial parse).
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsr/bounds.hpp"
#include "qsr/forward.hpp"
#include "qsr/io.hpp"
#include "qsr/labeling.hpp"
#include "qsr/recovery.hpp"
#include "qsr/regime.hpp"
#include "qsr/scenario.hpp"
#include "qsr/signal.hpp"

namespace {

using nlohmann::ordered_json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

qsr::BlurMixture make_blur(const std::vector<double>& sigmas, std::vector<double> weights) {
    if (sigmas.empty()) throw std::runtime_error("at least one --sigma is required");
    if (weights.empty()) weights.assign(sigmas.size(), 1.0 / double(sigmas.size()));
    return qsr::BlurMixture{weights, sigmas};
}

std::string counts_line(const std::vector<qsr::Counts>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

std::string labels_line(const qsr::TokenSeq& seq) {
    std::ostringstream os;
    for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? " " : "") << qsr::token_name(seq[i]);
    return os.str();
}

std::string interval_text(const qsr::CountsInterval& c) {
    if (c.exact()) return std::to_string(c.lo);
    return "[" + std::to_string(c.lo) + "," + std::to_string(c.hi) + "]";
}

int cmd_simulate(const std::string& signal_path, const qsr::BlurMixture& blur, double t0,
                 std::size_t count, const std::string& out) {
    const qsr::PiecewiseSignal s = qsr::signal_from_json(slurp(signal_path));
    const qsr::SamplingGrid grid{t0, 1.0, count};
    const qsr::SampleResult sr = qsr::sample(s, blur, grid);
    for (const auto& w : sr.warnings)
        std::cerr << "warning: sample " << w.sample_index << " lies near a rounding boundary ("
                  << w.unrounded_counts << " counts)\n";
    spill(out, qsr::observation_to_json(sr.observation));
    return 0;
}

int cmd_diff(const std::string& obs_path, bool label, const std::string& signal_path,
             const std::vector<double>& sigmas, const std::vector<double>& weights,
             const std::string& format, const std::string& out) {
    const qsr::Observation obs = qsr::observation_from_json(slurp(obs_path));
    const qsr::DifferenceSequence d = qsr::difference_sequence(obs);
    qsr::TokenSeq labels;
    if (label) {
        if (signal_path.empty())
            throw std::runtime_error("--label needs --signal and --sigma for ground truth");
        const qsr::PiecewiseSignal s = qsr::signal_from_json(slurp(signal_path));
        const qsr::BlurMixture blur = make_blur(sigmas, weights);
        const auto m = qsr::measurement_matrix(s, blur, obs.grid, obs);
        labels = qsr::label_from_truth(qsr::difference_matrix(m),
                                       qsr::segmentation(s, obs.grid));
    }
    if (format == "json") {
        ordered_json j;
        j["delta"] = d;
        if (label) {
            j["labels"] = ordered_json::array();
            for (qsr::Token t : labels) j["labels"].push_back(qsr::token_name(t));
        }
        spill(out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "delta: " << counts_line(d) << "\n";
        if (label) os << "labels: " << labels_line(labels) << "\n";
        spill(out, os.str());
    }
    return 0;
}

int cmd_analyze(const std::string& obs_path, const std::string& signal_path,
                const qsr::BlurMixture& blur, const std::string& format,
                const std::string& out) {
    const qsr::Observation obs = qsr::observation_from_json(slurp(obs_path));
    const qsr::PiecewiseSignal s = qsr::signal_from_json(slurp(signal_path));
    const qsr::RegimeProfile profile = qsr::make_profile(s);
    const auto m = qsr::measurement_matrix(s, blur, obs.grid, obs);
    const auto md = qsr::difference_matrix(m);
    const auto seg = qsr::segmentation(s, obs.grid);
    const auto delta = qsr::difference_sequence(obs);
    const double mg = qsr::min_gap(s);

    const qsr::CheckReport checks[] = {
        qsr::check_prop3(m, md, mg),    qsr::check_prop4(seg, 2, mg),
        qsr::check_prop5(md, mg),       qsr::check_prop6(md, mg),
        qsr::check_theorem7(delta, seg, m),
    };
    bool all_passed = qsr::prop1_holds(blur, profile);

    if (format == "json") {
        ordered_json j;
        j["sigma_max"] = qsr::format_time(blur.sigma_max());
        j["sigma_bound"] = qsr::format_time(profile.sigma_bound);
        j["one_critical_regime"] = qsr::prop1_holds(blur, profile);
        j["nus"] = ordered_json::array();
        for (double n : profile.nus) j["nus"].push_back(qsr::format_time(n));
        j["checks"] = ordered_json::array();
        for (const auto& c : checks) {
            all_passed = all_passed && c.passed;
            ordered_json cj;
            cj["id"] = c.id;
            cj["passed"] = c.passed;
            cj["notes"] = c.notes;
            cj["flagged"] = c.flagged;
            j["checks"].push_back(std::move(cj));
        }
        spill(out, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "sigma_max " << blur.sigma_max() << ", bound " << profile.sigma_bound
           << ", one-critical regime: " << (qsr::prop1_holds(blur, profile) ? "yes" : "no")
           << "\n";
        for (const auto& c : checks) {
            all_passed = all_passed && c.passed;
            os << c.id << ": " << (c.passed ? "ok" : "FAILED") << "\n";
            for (const auto& n : c.notes) os << "  " << n << "\n";
            for (const auto& f : c.flagged) os << "  (report) " << f << "\n";
        }
        spill(out, os.str());
    }
    return all_passed ? 0 : 1;
}

int cmd_recover(const std::string& path0, const std::string& path1, double sigma_max,
                const std::string& format, const std::string& out) {
    const qsr::Observation obs0 = qsr::observation_from_json(slurp(path0));
    const qsr::Observation obs1 = qsr::observation_from_json(slurp(path1));
    const qsr::RecoveryResult r =
        qsr::recover(qsr::difference_sequence(obs0), qsr::difference_sequence(obs1));

    std::vector<qsr::ObservationBrackets> brackets;
    const qsr::Observation* obs[2] = {&obs0, &obs1};
    const qsr::TokenSeq* labels[2] = {&r.labels0, &r.labels1};
    for (int i = 0; i < 2; ++i) {
        qsr::ObservationBrackets ob;
        ob.observation = std::size_t(i);
        ob.anchor_rows = qsr::anchors(*labels[i]);
        for (std::size_t j = 0; j < ob.anchor_rows.size() && j < r.gd.size(); ++j) {
            const auto& e = r.gd[j];
            const qsr::Counts mag = std::max(std::abs(e.lo), std::abs(e.hi));
            ob.brackets.push_back(qsr::locate(ob.anchor_rows[j].side, ob.anchor_rows[j].row,
                                              obs[i]->grid.t0, qsr::nu(mag), sigma_max));
        }
        ob.anchor_rows.resize(ob.brackets.size());
        brackets.push_back(std::move(ob));
    }

    if (format == "json") {
        spill(out, qsr::result_to_json(r, brackets));
    } else {
        std::ostringstream os;
        os << "complete: " << (r.complete ? "yes" : "no") << "\n";
        os << "labels0: " << labels_line(r.labels0) << "\n";
        os << "labels1: " << labels_line(r.labels1) << "\n";
        os << "gd:";
        for (const auto& e : r.gd) os << " " << interval_text(e);
        os << "\namplitudes:";
        for (const auto& e : r.amplitudes) os << " " << interval_text(e);
        os << "\ntrace:";
        for (const auto& t : r.trace) os << " " << t;
        os << "\n";
        for (const auto& ob : brackets)
            for (std::size_t j = 0; j < ob.brackets.size(); ++j)
                os << "obs" << ob.observation << " break " << j << ": ("
                   << ob.brackets[j].lo << ", " << ob.brackets[j].hi << ")\n";
        for (const auto& dgn : r.diagnostics) os << "note: " << dgn << "\n";
        spill(out, os.str());
    }
    return r.complete ? 0 : 4;
}

int cmd_check(std::uint64_t seed, int trials, double gap_lo, double gap_hi, double mixture_rate,
              const std::string& format, const std::string& out) {
    qsr::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.gap_lo = gap_lo;
    cfg.gap_hi = gap_hi;
    cfg.mixture_rate = mixture_rate;
    const qsr::PropertyReport rep = qsr::run_properties(cfg);
    if (format == "json") {
        ordered_json j;
        j["trials"] = rep.trials;
        j["rejected_draws"] = rep.rejected_draws;
        j["rejects_by_reason"] = rep.rejects_by_reason;
        j["structure_violations"] = rep.structure_violations;
        j["recovery_violations"] = rep.recovery_violations;
        j["bounds_violations"] = rep.bounds_violations;
        j["gap_disagreements"] = rep.gap_disagreements;
        j["alt_form_misses"] = rep.alt_form_misses;
        j["complete_recoveries"] = rep.complete_recoveries;
        j["exact_recoveries"] = rep.exact_recoveries;
        j["gaps_checked"] = rep.gaps_checked;
        j["gaps_category1"] = rep.gaps_category1;
        j["gaps_category3"] = rep.gaps_category3;
        j["failures"] = rep.failures;
        j["ok"] = rep.ok();
        spill(out, j.dump(2) + "\n");
    } else {
        spill(out, qsr::report_text(rep));
    }
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise-constant signals from quantized blurred samples"};
    app.require_subcommand(1);

    std::string signal_path, obs_path, obs_path1, out, format = "json";
    std::vector<double> sigmas, weights;
    double t0 = 0.0, sigma_max = 0.0;
    std::size_t count = 0;
    bool label = false;
    std::uint64_t seed = 1;
    int trials = 100;
    double gap_lo = 1.5, gap_hi = 2.0, mixture_rate = 0.2;

    CLI::App* sim = app.add_subcommand("simulate", "blur, sample, and quantize a signal");
    sim->add_option("signal", signal_path, "signal file (json)")->required();
    sim->add_option("--sigma", sigmas, "blur component width, units of T")->required();
    sim->add_option("--weight", weights, "blur component weights (default: uniform)");
    sim->add_option("--t0", t0, "first sample time, units of T")->required();
    sim->add_option("--count", count, "number of samples")->required();
    sim->add_option("--out", out, "output file (default: stdout)");

    CLI::App* dif = app.add_subcommand("diff", "difference sequence of an observation");
    dif->add_option("observation", obs_path, "observation file (json)")->required();
    dif->add_flag("--label", label, "also derive ground-truth labels");
    dif->add_option("--signal", signal_path, "signal file, needed for --label");
    dif->add_option("--sigma", sigmas, "blur component width, needed for --label");
    dif->add_option("--weight", weights, "blur component weights");
    dif->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    dif->add_option("--out", out, "output file (default: stdout)");

    CLI::App* ana = app.add_subcommand("analyze", "structural checks for one observation");
    ana->add_option("observation", obs_path, "observation file (json)")->required();
    ana->add_option("--signal", signal_path, "signal file (json)")->required();
    ana->add_option("--sigma", sigmas, "blur component width")->required();
    ana->add_option("--weight", weights, "blur component weights");
    ana->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    ana->add_option("--out", out, "output file (default: stdout)");

    CLI::App* rec = app.add_subcommand("recover", "amplitudes from two observations");
    rec->add_option("observation0", obs_path, "first observation file")->required();
    rec->add_option("observation1", obs_path1, "second observation file")->required();
    rec->add_option("--sigma-max", sigma_max, "largest blur width, units of T")->required();
    rec->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    rec->add_option("--out", out, "output file (default: stdout)");

    CLI::App* chk = app.add_subcommand("check", "randomized property harness");
    chk->add_option("--seed", seed, "generator seed");
    chk->add_option("--trials", trials, "number of instances");
    chk->add_option("--min-gap-lo", gap_lo, "shortest break gap, units of T");
    chk->add_option("--min-gap-hi", gap_hi, "longest break gap, units of T");
    chk->add_option("--mixture-rate", mixture_rate, "fraction of two-component blurs");
    chk->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    chk->add_option("--out", out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(signal_path, make_blur(sigmas, weights), t0, count, out);
        if (dif->parsed())
            return cmd_diff(obs_path, label, signal_path, sigmas, weights, format, out);
        if (ana->parsed())
            return cmd_analyze(obs_path, signal_path, make_blur(sigmas, weights), format, out);
        if (rec->parsed()) return cmd_recover(obs_path, obs_path1, sigma_max, format, out);
        if (chk->parsed())
            return cmd_check(seed, trials, gap_lo, gap_hi, mixture_rate, format, out);
    } catch (const qsr::IdenticalInputsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qsr::InconsistentInputsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
