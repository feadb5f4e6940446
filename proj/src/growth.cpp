#include "eigengrowth/growth.hpp"

#include "eigengrowth/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "growth";

bool alive(std::span<const double> x) { return std::isfinite(x[0]); }

void require_grid(const PathEnsemble& ens) {
    if (ens.record_every == 0) {
        throw PreconditionError(kModule, "ensemble must record intermediate states (record_every >= 1)");
    }
}

double order_stat(const std::vector<double>& sorted, double p) {
    const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(sorted.size() - 1)));
    return sorted[idx];
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

/// U(s, x) = P_x[Brownian motion stays positive up to s] = 2Φ(x/√s) − 1.
double survival(double s, double x) { return std::erf(x / std::sqrt(2.0 * s)); }

}  // namespace

std::vector<WealthPath> wealth_star(const Eigenpair& pair, const PathEnsemble& ens) {
    if (pair.dim != ens.dim) throw PreconditionError(kModule, "eigenpair and ensemble dimensions differ");
    std::vector<WealthPath> out(ens.n_paths);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        WealthPath& w = out[p];
        w.t = ens.times;
        w.v.resize(ens.records());
        const double eta0 = pair.eta(ens.state(p, 0));
        double last = 1.0;
        for (std::size_t k = 0; k < ens.records(); ++k) {
            const auto x = ens.state(p, k);
            if (!alive(x)) {
                w.absorbed = true;
                w.v[k] = last;
                continue;
            }
            const double e = pair.eta(x);
            if (!(e > 0.0) || !std::isfinite(e)) {
                throw DomainError(kModule, "eta is not finite and positive at a simulated state");
            }
            last = std::exp(pair.lambda * ens.times[k]) * e / eta0;
            w.v[k] = last;
        }
        w.v[0] = 1.0;
    }
    return out;
}

std::vector<WealthPath> wealth_integrate(const Strategy& theta, const PathEnsemble& ens) {
    require_grid(ens);
    const std::size_t d = ens.dim;
    std::vector<WealthPath> out(ens.n_paths);
    std::vector<double> pos(d);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        WealthPath& w = out[p];
        w.t = ens.times;
        w.v.assign(ens.records(), 0.0);
        double v = 1.0;
        w.v[0] = v;
        for (std::size_t k = 1; k < ens.records(); ++k) {
            const auto x = ens.state(p, k - 1);
            const auto y = ens.state(p, k);
            if (!alive(y)) {
                w.absorbed = true;
                w.v[k] = v;
                continue;
            }
            if (v > 0.0) {
                theta(x, v, pos);
                double dv = 0.0;
                for (std::size_t i = 0; i < d; ++i) dv += pos[i] * (y[i] - x[i]);
                v += dv;
                if (!(v > 0.0)) {
                    v = 0.0;
                    w.ruined = true;
                }
            }
            w.v[k] = v;
        }
    }
    return out;
}

Strategy eigen_strategy(const Eigenpair& pair) {
    return [pair](std::span<const double> x, double v, std::span<double> out) {
        pair.grad_log_eta(x, out);
        for (double& o : out) o *= v;
    };
}

std::vector<double> gamma_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw PreconditionError(kModule, "gamma grid needs lo <= hi, step > 0");
    std::vector<double> g;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

GrowthReport growth_rate(const std::vector<WealthPath>& paths, const std::vector<double>& grid) {
    if (paths.empty()) throw EmptyReportError(kModule, "no wealth paths");
    GrowthReport r;
    r.horizon = paths.front().t.back();
    if (!(r.horizon > 0.0)) throw PreconditionError(kModule, "final horizon must be > 0");
    std::vector<double> rates;
    rates.reserve(paths.size());
    for (const WealthPath& w : paths) {
        if (w.absorbed) {
            ++r.skipped_absorbed;
            continue;
        }
        const double v = w.terminal();
        rates.push_back(v > 0.0 ? std::log(v) / r.horizon : -std::numeric_limits<double>::infinity());
    }
    if (rates.empty()) throw EmptyReportError(kModule, "every path was absorbed");
    r.used = rates.size();
    std::sort(rates.begin(), rates.end());
    const auto n = rates.size();
    const auto needed = static_cast<std::size_t>(std::ceil(kGrowthThreshold * static_cast<double>(n)));
    r.g_quantile = rates[n - needed];
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) r.quantiles.push_back(order_stat(rates, p));
    r.gammas = grid;
    for (double g : grid) {
        const auto above = static_cast<std::size_t>(
            rates.end() - std::lower_bound(rates.begin(), rates.end(), g));
        const double frac = static_cast<double>(above) / static_cast<double>(n);
        r.fractions.push_back(frac);
        if (frac >= kGrowthThreshold) r.g_hat = std::max(r.g_hat, g);
    }
    return r;
}

std::vector<SweepRow> robustness_sweep(const Eigenpair& pair, const DomainSpec& domain,
                                       const CovarianceField& c,
                                       const std::vector<DriftField>& drifts, const Point& x0,
                                       const SimConfig& cfg, const SweepOptions& options) {
    if (cfg.record_every == 0) {
        throw PreconditionError(kModule, "robustness_sweep needs record_every >= 1");
    }
    std::vector<double> grid = options.gammas;
    if (grid.empty()) grid = gamma_grid(pair.lambda - 2.0, pair.lambda + 2.0, 0.01);
    std::vector<SweepRow> rows;
    for (const DriftField& b : drifts) {
        const PathEnsemble ens = simulate(Measure::with_drift(b), domain, c, x0, cfg);
        SweepRow row;
        row.drift = b.name;
        row.absorbed_fraction =
            static_cast<double>(ens.absorbed_count()) / static_cast<double>(ens.n_paths);
        std::size_t inside = 0, total = 0;
        for (std::size_t p = 0; p < ens.n_paths; ++p) {
            for (std::size_t k = 0; k < ens.records(); ++k) {
                if (ens.times[k] < 0.5 * ens.T) continue;
                const auto x = ens.state(p, k);
                ++total;
                if (alive(x) && domain.member(options.compact_level, x)) ++inside;
            }
        }
        row.time_in_compact = total ? static_cast<double>(inside) / static_cast<double>(total) : 0.0;
        row.tight = row.time_in_compact >= options.tightness_threshold;
        try {
            const GrowthReport g = growth_rate(wealth_star(pair, ens), grid);
            row.g_hat = g.g_hat;
            row.g_quantile = g.g_quantile;
        } catch (const EmptyReportError&) {
            row.g_hat = -std::numeric_limits<double>::infinity();
            row.g_quantile = row.g_hat;
        }
        row.claim_holds = row.g_hat >= pair.lambda - options.tolerance;
        rows.push_back(row);
    }
    return rows;
}

NumeraireResult numeraire_check(const Eigenpair& pair, const DomainSpec& domain,
                                const CovarianceField& c, const Strategy& candidate,
                                const Point& x0, const SimConfig& cfg, std::size_t checkpoints) {
    if (cfg.record_every == 0) throw PreconditionError(kModule, "numeraire_check needs record_every >= 1");
    if (checkpoints < 2) throw PreconditionError(kModule, "need at least 2 checkpoints");
    const PathEnsemble ens = simulate(Measure::pstar(pair), domain, c, x0, cfg);
    const auto star = wealth_star(pair, ens);
    const auto cand = wealth_integrate(candidate, ens);
    const std::size_t last = ens.records() - 1;
    checkpoints = std::min(checkpoints, ens.records());
    NumeraireResult r;
    for (std::size_t j = 0; j < checkpoints; ++j) {
        const std::size_t k = j * last / (checkpoints - 1);
        double sum = 0.0, sum2 = 0.0;
        std::size_t n = 0;
        for (std::size_t p = 0; p < ens.n_paths; ++p) {
            if (star[p].absorbed) continue;
            const double ratio = cand[p].v[k] / star[p].v[k];
            sum += ratio;
            sum2 += ratio * ratio;
            ++n;
        }
        if (n == 0) throw EmptyReportError(kModule, "every Pstar path was absorbed");
        const double nn = static_cast<double>(n);
        const double mean = sum / nn;
        const double var = std::max(0.0, sum2 / nn - mean * mean) * nn / std::max(1.0, nn - 1.0);
        r.times.push_back(ens.times[k]);
        r.mean_ratio.push_back(mean);
        r.std_error.push_back(std::sqrt(var / nn));
    }
    for (std::size_t j = 1; j < r.mean_ratio.size(); ++j) {
        const double slack = 3.0 * std::hypot(r.std_error[j], r.std_error[j - 1]);
        if (r.mean_ratio[j] > r.mean_ratio[j - 1] + slack) r.monotone_pass = false;
    }
    return r;
}

WealthPath optimal_arbitrage_closed_form(const std::vector<double>& times,
                                         const std::vector<double>& xs, double T) {
    if (times.empty() || times.size() != xs.size()) {
        throw PreconditionError(kModule, "times and states must be non-empty and of equal length");
    }
    const double x0 = xs.front();
    if (!(x0 > 0.0)) throw PreconditionError(kModule, "x0 must be positive");
    WealthPath w;
    w.t = times;
    w.v.resize(times.size());
    const double base = survival(T - times.front(), x0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] < T)) {
            throw RangeError(kModule, "optimal arbitrage needs t < T (t = " +
                                          std::to_string(times[k]) + ", T = " + std::to_string(T) + ")");
        }
        const double x = xs[k];
        if (!std::isfinite(x)) {
            w.absorbed = true;
            w.v[k] = 0.0;
            continue;
        }
        w.v[k] = x > 0.0 ? survival(T - times[k], x) / base : 0.0;
    }
    return w;
}

ArbitrageReport arbitrage_convergence(double t, const std::vector<double>& T_list,
                                      const SimConfig& cfg, double x0) {
    if (T_list.empty()) throw PreconditionError(kModule, "T_list must not be empty");
    for (double T : T_list) {
        if (!(T > t)) throw PreconditionError(kModule, "every T must exceed t");
    }
    if (cfg.record_every == 0) throw PreconditionError(kModule, "arbitrage_convergence needs record_every >= 1");
    const DomainSpec domain = DomainSpec::interval(0.0, 1e6);
    const CovarianceField c = CovarianceField::one_dimensional(
        "brownian", [](double) { return 1.0; }, EndpointOrders{0.0, 0.0, true});
    const Eigenpair pair = Eigenpair::one_dimensional(
        0.0, x0, [](double x) { return x; }, [](double x) { return 1.0 / x; }, "bessel");
    SimConfig sim = cfg;
    sim.T = t;
    const PathEnsemble ens = simulate(Measure::pstar(pair), domain, c, {x0}, sim);
    const auto star = wealth_star(pair, ens);

    ArbitrageReport rep;
    rep.t = t;
    std::vector<double> xs(ens.records());
    std::vector<double> sup_dev(ens.n_paths), gap(ens.n_paths);
    std::vector<double> medians, gaps;
    for (double T : T_list) {
        std::size_t used = 0;
        for (std::size_t p = 0; p < ens.n_paths; ++p) {
            if (star[p].absorbed) continue;
            for (std::size_t k = 0; k < ens.records(); ++k) xs[k] = ens.state(p, k)[0];
            const WealthPath vt = optimal_arbitrage_closed_form(ens.times, xs, T);
            double dev = 0.0;
            for (std::size_t k = 0; k < ens.records(); ++k) {
                dev = std::max(dev, std::abs(vt.v[k] - star[p].v[k]));
            }
            sup_dev[used] = dev;
            gap[used] = std::abs(vt.v.back() / star[p].v.back() - 1.0);
            ++used;
        }
        if (used == 0) throw EmptyReportError(kModule, "every Pstar path was absorbed");
        std::vector<double> dev(sup_dev.begin(), sup_dev.begin() + static_cast<std::ptrdiff_t>(used));
        std::sort(dev.begin(), dev.end());
        double mean_gap = 0.0;
        for (std::size_t i = 0; i < used; ++i) mean_gap += gap[i];
        mean_gap /= static_cast<double>(used);
        ArbitrageRow row{T, order_stat(dev, 0.5), order_stat(dev, 0.95), mean_gap};
        if (dev.size() % 2 == 0) {
            row.median_sup_deviation = 0.5 * (dev[dev.size() / 2 - 1] + dev[dev.size() / 2]);
        } else {
            row.median_sup_deviation = dev[dev.size() / 2];
        }
        medians.push_back(row.median_sup_deviation);
        gaps.push_back(mean_gap);
        rep.rows.push_back(row);
    }
    rep.sup_deviation_decreasing = strictly_decreasing(medians);
    rep.density_gap_decreasing = strictly_decreasing(gaps);
    return rep;
}

}  // namespace eigengrowth
