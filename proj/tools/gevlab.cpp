// Command-line driver: transforms, order classification, eigen-solves,
// counterexample growth studies and inequality sweeps.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gevlab/gevlab.hpp"

namespace {

using namespace gevlab;

enum Exit : int { kOk = 0, kError = 1, kInconclusive = 2, kUsage = 64 };

struct Options {
    int p = 1;
    int q = 2;
    double gamma = -1.0;  // negative: 1 / order
    double order = 2.0;
    double x0 = 0.0;
    bool x0_set = false;
    std::vector<double> tau_ladder{1, 10, 100, 1000, 10000};
    std::vector<double> freq_ladder;
    std::vector<long long> n_ladder;
    double grid_x = 0.0;  // 0: default rule
    double grid_h = 1e-3;
    std::size_t count = 1;
    std::string input;
    std::string out;
    std::uint64_t seed = 42;
    std::vector<std::string> pairs{"1,2", "2,3", "3,4"};
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        report::write_file(path, text);
}

std::string csv(const report::Table& t) {
    std::ostringstream s;
    report::write_csv(s, t);
    return s.str();
}

/// Bump of the requested order on its canonical interval, and the base point where it is least regular.
struct Bump {
    SampledFunction<wide_real> u;
    double x0;
};

Bump canonical_bump(double order, double xi_max) {
    const bool analytic = order == 1.0;
    const double a = analytic ? -24.0 : -1.0, b = analytic ? 24.0 : 1.0;
    return {make_gevrey_bump<wide_real>(GevreyOrder(order), a, b, bump_grid_resolving(a, b, xi_max)),
            analytic ? 0.0 : a};
}

std::vector<double> ladder_or_default(const Options& o) {
    return o.freq_ladder.empty() ? default_frequency_ladder() : o.freq_ladder;
}

double gamma_for(const Options& o) { return o.gamma >= 0 ? o.gamma : 1.0 / o.order; }

int run_transform(const Options& o) {
    const auto ladder = ladder_or_default(o);
    double xi_max = 0;
    for (double v : ladder) xi_max = std::max(xi_max, v);
    std::vector<std::vector<complex_t<wide_real>>> base;
    std::vector<std::vector<double>> freqs;
    for (double v : ladder) freqs.push_back({v});
    FbiField<wide_real> field;
    if (!o.input.empty()) {
        std::ifstream in(o.input);
        if (!in) throw std::runtime_error("cannot read " + o.input);
        const auto u = convert<wide_real>(report::read_sampled_function_csv(in, 0.0));
        base.push_back({complex_t<wide_real>(wide_real(o.x0), wide_real(0))});
        field = fbi_field(u, base, freqs, GammaExponent(gamma_for(o)));
    } else {
        const auto bump = canonical_bump(o.order, xi_max);
        const double x0 = o.x0_set ? o.x0 : bump.x0;
        base.push_back({complex_t<wide_real>(wide_real(x0), wide_real(0))});
        field = fbi_field(bump.u, base, freqs, GammaExponent(gamma_for(o)));
    }
    auto table = report::fbi_field_table(field);
    table.preamble.insert(table.preamble.begin(), "pipeline: FBI transform F_gamma u(x0, xi) along a frequency ray");
    emit(o.out, csv(table));
    return kOk;
}

int run_classify(const Options& o) {
    const auto ladder = ladder_or_default(o);
    double xi_max = 0;
    for (double v : ladder) xi_max = std::max(xi_max, v);
    nlohmann::ordered_json j;
    j["pipeline"] = "Gevrey order from stretched-exponential decay of the FBI transform";
    j["gamma"] = gamma_for(o);
    try {
        FbiOrderEstimate e = [&] {
            if (!o.input.empty()) {
                std::ifstream in(o.input);
                if (!in) throw std::runtime_error("cannot read " + o.input);
                const auto u = convert<wide_real>(report::read_sampled_function_csv(in, 0.0));
                return estimate_order_fbi(u, o.x0, GammaExponent(gamma_for(o)), ladder);
            }
            const auto bump = canonical_bump(o.order, xi_max);
            j["generated_order"] = o.order;
            return estimate_order_fbi(bump.u, o.x0_set ? o.x0 : bump.x0, GammaExponent(gamma_for(o)), ladder);
        }();
        j["s"] = e.order.value();
        j["fit"] = report::to_json(e.fit);
        j["prefactor_exponent"] = e.fit.beta;
        emit(o.out, j.dump(2) + "\n");
        return kOk;
    } catch (const fit_rejected& ex) {
        j["inconclusive"] = ex.what();
        emit(o.out, j.dump(2) + "\n");
        return kInconclusive;
    }
}

EigenGrid grid_for(const Options& o, const OperatorParams& params) {
    EigenGrid g = default_eigen_grid(params);
    if (o.grid_x > 0) g.X = o.grid_x;
    g.h = o.grid_h;
    return g;
}

int run_eigen(const Options& o) {
    const OperatorParams params(o.p, o.q);
    const auto pairs = solve_nonlinear_eigen(params, grid_for(o, params), o.count);
    if (pairs.empty()) {
        std::cout << "no real eigenvalue passed the residual and grid-stability filters for (p, q) = (" << o.p << ", "
                  << o.q << ")\n";
        return kOk;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::cout << "z[" << i << "] = " << report::number(pairs[i].z) << "  residual " << report::number(pairs[i].residual)
                  << "  grid stability " << report::number(pairs[i].grid_stability) << "\n";
        if (!o.out.empty()) {
            auto table = report::eigenpair_table(pairs[i], params);
            table.preamble.push_back("pipeline: real eigenpair of f'' - x^{2(q-1)} f + z x^{2(p-1)} f = 0");
            const std::string path = pairs.size() == 1 ? o.out : o.out + "." + std::to_string(i);
            report::write_file(path, csv(table));
        }
    }
    return kOk;
}

int run_counterexample(const Options& o) {
    const OperatorParams params(o.p, o.q);
    const auto pairs = solve_nonlinear_eigen(params, grid_for(o, params), 1);
    if (pairs.empty()) {
        std::cout << "no eigenpair available for (p, q) = (" << o.p << ", " << o.q << ")\n";
        return kInconclusive;
    }
    const auto ladder = o.n_ladder.empty() ? default_n_ladder() : o.n_ladder;
    const auto est = estimate_optimal_exponent(pairs.front(), params, ladder);
    auto table = report::growth_table_report(est.rows);
    table.preamble.insert(table.preamble.begin(),
                          "pipeline: derivative growth of the kernel family F_lambda at lambda = N^{q/p}");
    if (!o.out.empty()) report::write_file(o.out, csv(table));
    std::cout << "z = " << report::number(pairs.front().z) << "\n"
              << "s0 = " << report::number(est.s0) << "  (q/p = " << report::number(params.critical_order())
              << ", regression rms " << report::number(est.residual_rms) << ")\n";
    return est.inconclusive ? kInconclusive : kOk;
}

int run_inequalities(const Options& o) {
    const OperatorParams params(o.p, o.q);
    ProbeOptions po;
    po.seed = o.seed;
    const auto probes = probe_family(po);
    const auto weights = weight_inequality_rows(params, o.tau_ladder, 1.0);
    report::Table t;
    t.preamble = {"pipeline: a priori, weight and inverse-norm inequalities for A_tau, tau = (0, tau2)",
                  "p=" + std::to_string(o.p) + " q=" + std::to_string(o.q) + " seed=" + std::to_string(o.seed)};
    t.columns = {"tau", "apriori_max_ratio", "apriori_undefined", "weight_sup_ratio", "weight_argmax_x"};
    for (std::size_t i = 0; i < o.tau_ladder.size(); ++i) {
        const auto sweep = max_apriori_ratio(probes, Tau{0.0, o.tau_ladder[i]}, params);
        t.rows.push_back({report::number(o.tau_ladder[i]), report::number(sweep.max_ratio),
                          std::to_string(sweep.undefined), report::number(weights[i].sup_ratio),
                          report::number(weights[i].argmax_x)});
    }
    emit(o.out, csv(t));
    return kOk;
}

int run_demo(const Options& o) {
    report::Table t;
    t.preamble = {"pipeline: optimal Gevrey exponent from the kernel family F_lambda"};
    t.columns = {"p", "q", "q_over_p", "s0_estimate", "abs_error"};
    bool inconclusive = false;
    for (const auto& text : o.pairs) {
        int p = 0, q = 0;
        char comma = 0;
        std::istringstream in(text);
        if (!(in >> p >> comma >> q) || comma != ',') throw CLI::ValidationError("--pairs", "expected p,q but got " + text);
        const OperatorParams params(p, q);
        const auto pairs = solve_nonlinear_eigen(params, grid_for(o, params), 1);
        if (pairs.empty()) {
            inconclusive = true;
            t.rows.push_back({std::to_string(p), std::to_string(q), report::number(params.critical_order()), "nan", "nan"});
            continue;
        }
        const auto est = estimate_optimal_exponent(pairs.front(), params);
        inconclusive = inconclusive || est.inconclusive;
        t.rows.push_back({std::to_string(p), std::to_string(q), report::number(params.critical_order()),
                          report::number(est.s0), report::number(std::abs(est.s0 - params.critical_order()))});
    }
    emit(o.out, csv(t));
    return inconclusive ? kInconclusive : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gevrey regularity laboratory"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1);
    Options o;

    auto add_pq = [&](CLI::App* sub) {
        sub->add_option("--p", o.p, "exponent p >= 1")->check(CLI::PositiveNumber);
        sub->add_option("--q", o.q, "exponent q >= p")->check(CLI::PositiveNumber);
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--grid-x", o.grid_x, "eigen grid half-width (default: X^{2(q-1)} = 1e6)");
        sub->add_option("--grid-h", o.grid_h, "eigen grid spacing")->check(CLI::PositiveNumber);
    };
    auto add_fbi = [&](CLI::App* sub) {
        sub->add_option("--order", o.order, "Gevrey order of the generated bump")->check(CLI::Range(1.0, 10.0));
        sub->add_option("--gamma", o.gamma, "transform exponent in [0, 1] (default 1/order)")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--freq-ladder", o.freq_ladder, "comma-separated frequencies")->delimiter(',');
        sub->add_option("--input", o.input, "SampledFunction CSV instead of a generated bump");
        sub->add_option("--x0", o.x0, "base point")->each([&](const std::string&) { o.x0_set = true; });
    };

    auto* transform = app.add_subcommand("transform", "FBI transform along a frequency ray (CSV)");
    add_fbi(transform);
    auto* classify = app.add_subcommand("classify", "Gevrey order from FBI decay (JSON)");
    add_fbi(classify);
    auto* eigen = app.add_subcommand("eigen", "real eigenpairs of the nonlinear eigenproblem");
    add_pq(eigen);
    add_grid(eigen);
    eigen->add_option("--count", o.count, "number of eigenpairs")->check(CLI::PositiveNumber);
    auto* counter = app.add_subcommand("counterexample", "growth table and optimal exponent");
    add_pq(counter);
    add_grid(counter);
    counter->add_option("--n-ladder", o.n_ladder, "comma-separated N values")->delimiter(',');
    auto* ineq = app.add_subcommand("inequalities", "uniformity sweeps over a tau ladder (CSV)");
    add_pq(ineq);
    ineq->add_option("--tau-ladder", o.tau_ladder, "comma-separated |tau| values >= 1")->delimiter(',');
    auto* demo = app.add_subcommand("demo", "optimal exponent table for several (p, q)");
    demo->add_option("--pairs", o.pairs, "pairs p,q")->expected(1, -1);
    add_grid(demo);

    for (auto* sub : {transform, classify, eigen, counter, ineq, demo}) {
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--seed", o.seed, "RNG seed for probe families");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (o.q < o.p) throw CLI::ValidationError("--q", "q must be >= p");
        if (*transform) return run_transform(o);
        if (*classify) return run_classify(o);
        if (*eigen) return run_eigen(o);
        if (*counter) return run_counterexample(o);
        if (*ineq) return run_inequalities(o);
        if (*demo) return run_demo(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kUsage;
}
