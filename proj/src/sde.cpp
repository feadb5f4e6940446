#include "eigengrowth/sde.hpp"

#include "eigengrowth/error.hpp"
#include "eigengrowth/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <boost/random/normal_distribution.hpp>
#include <thread>

namespace eigengrowth {

namespace {

constexpr const char* kModule = "sde";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Outcome { ok, absorbed, outer, sigma };

/// A step is split while the boundary of E lies within this many local
/// standard deviations (plus the drift move) of its start. The decision never
/// looks at the step's own increment.
constexpr double kReach = 6.5;

/// Per-path bookkeeping shared by both kernels.
struct Track {
    double t = 0.0;
    int next_level = 0;
    double* level_exit = nullptr;  // null when levels are not tracked
    int levels = 0;
};

/// Bounds of E_n for a one-dimensional domain; empty sets come back as (inf, -inf).
std::pair<double, double> level_bounds_1d(const DomainSpec& d, int n) {
    if (d.kind() == DomainKind::orthant) {
        if (n == 0) return {kNeverExited, -kNeverExited};
        return {1.0 / n, static_cast<double>(n)};
    }
    const double h = d.interval_gap(n);
    const double upper = std::isfinite(d.beta()) ? d.beta() - h : d.alpha() + std::ldexp(1.0, n + 2);
    return {d.alpha() + h, upper};
}

class Kernel1D {
public:
    Kernel1D(const Measure& m, const DomainSpec& domain, const CovarianceField& c,
             const SimConfig& cfg)
        : c_(c.scalar), cfg_(cfg), log_euler_(cfg.scheme == Scheme::log_euler) {
        if (m.kind == Measure::Kind::pstar) {
            const ScalarFn dlog = m.pair.dlog1;
            const ScalarFn cs = c.scalar;
            drift_ = [cs, dlog](double x) { return cs(x) * dlog(x); };
        } else if (m.kind == Measure::Kind::drift) {
            drift_ = m.drift.scalar;
        }
        if (domain.kind() == DomainKind::orthant) {
            lo_ = 0.0;
            hi_ = kNeverExited;
        } else {
            lo_ = domain.alpha();
            hi_ = domain.beta();
        }
        const int levels = cfg.track_levels ? domain.exhaustion_count() : 0;
        for (int n = 0; n < levels; ++n) {
            const auto [a, b] = level_bounds_1d(domain, n);
            lev_lo_.push_back(a);
            lev_hi_.push_back(b);
        }
    }

    void mark_levels(std::span<const double> x, Track& tr) const { mark_levels(x[0], tr); }

    void mark_levels(double x, Track& tr) const {
        if (!tr.level_exit) return;
        while (tr.next_level < tr.levels &&
               !(x > lev_lo_[static_cast<std::size_t>(tr.next_level)] &&
                 x < lev_hi_[static_cast<std::size_t>(tr.next_level)])) {
            tr.level_exit[tr.next_level++] = tr.t;
        }
    }

    template <class Normal>
    Outcome advance(double& x, Track& tr, double h, double dw, int depth, Normal& normal) const {
        const double cx = c_(x);
        if (!(cx > 0.0) || !std::isfinite(cx)) return Outcome::sigma;
        const double s = std::sqrt(cx);
        const double b = drift_ ? drift_(x) : 0.0;
        const double reach = kReach * s * std::sqrt(h) + std::abs(b) * h;
        if (depth < cfg_.max_refine && std::min(x - lo_, hi_ - x) < reach) {
            // Brownian bridge split of the increment over [t, t+h].
            const double dw1 = 0.5 * dw + std::sqrt(0.25 * h) * normal();
            const Outcome first = advance(x, tr, 0.5 * h, dw1, depth + 1, normal);
            if (first != Outcome::ok) return first;
            return advance(x, tr, 0.5 * h, dw - dw1, depth + 1, normal);
        }
        double y;
        if (log_euler_) {
            y = x * std::exp((b / x - 0.5 * cx / (x * x)) * h + s / x * dw);
        } else {
            y = x + b * h + s * dw;
        }
        tr.t += h;
        if (!(y > lo_ && y < hi_) || !std::isfinite(y)) return Outcome::absorbed;
        if (std::abs(y) > cfg_.outer_radius) return Outcome::outer;
        x = y;
        mark_levels(x, tr);
        return Outcome::ok;
    }

private:
    ScalarFn c_;
    ScalarFn drift_;
    const SimConfig& cfg_;
    bool log_euler_;
    double lo_ = 0.0, hi_ = 1.0;
    std::vector<double> lev_lo_, lev_hi_;
};

class KernelND {
public:
    KernelND(const Measure& m, const DomainSpec& domain, const CovarianceField& c,
             const SimConfig& cfg)
        : m_(m), domain_(domain), c_(c), cfg_(cfg), d_(c.dim),
          log_euler_(cfg.scheme == Scheme::log_euler) {}

    void mark_levels(std::span<const double> x, Track& tr) const {
        if (!tr.level_exit) return;
        while (tr.next_level < tr.levels && !domain_.member(tr.next_level, x)) {
            tr.level_exit[tr.next_level++] = tr.t;
        }
    }

    /// Each face is compared with the local spread of the coordinate normal to it.
    bool near_boundary(const Eigen::VectorXd& x, const Eigen::MatrixXd& cm, const Eigen::VectorXd& b,
                       double h) const {
        if (domain_.kind() == DomainKind::interval) {
            const double reach = kReach * std::sqrt(cm.diagonal().maxCoeff() * h) + b.norm() * h;
            return domain_.boundary_distance(std::span<const double>(x.data(), d_)) < reach;
        }
        for (std::size_t i = 0; i < d_; ++i) {
            if (x(i) < kReach * std::sqrt(cm(i, i) * h) + std::abs(b(i)) * h) return true;
        }
        if (domain_.kind() == DomainKind::simplex) {
            const double gap = 1.0 - x.sum();
            return gap < kReach * std::sqrt(cm.sum() * h) + std::abs(b.sum()) * h;
        }
        return false;
    }

    template <class Normal>
    Outcome advance(Eigen::VectorXd& x, Track& tr, double h, const Eigen::VectorXd& dw,
                    int depth, Normal& normal) const {
        const std::span<const double> xs(x.data(), d_);
        Eigen::MatrixXd cm(d_, d_);
        c_.eval(xs, std::span<double>(cm.data(), d_ * d_));
        // row-major output equals the column-major matrix because c is symmetric
        Eigen::MatrixXd sigma(d_, d_);
        if (c_.factor) {
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> f(d_, d_);
            c_.factor(xs, std::span<double>(f.data(), d_ * d_));
            sigma = f;
        } else {
            try {
                sigma = sqrt_spd(cm);
            } catch (const NotPositiveDefiniteError&) {
                return Outcome::sigma;
            }
        }
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d_));
        if (m_.kind == Measure::Kind::pstar) {
            Eigen::VectorXd g(d_);
            m_.pair.grad_log_eta(xs, std::span<double>(g.data(), d_));
            b = cm * g;
        } else if (m_.kind == Measure::Kind::drift) {
            m_.drift.eval(xs, std::span<double>(b.data(), d_));
        }
        if (depth < cfg_.max_refine && !log_euler_ && near_boundary(x, cm, b, h)) {
            Eigen::VectorXd dw1(d_);
            const double sd = std::sqrt(0.25 * h);
            for (std::size_t i = 0; i < d_; ++i) dw1(i) = 0.5 * dw(i) + sd * normal();
            const Outcome first = advance(x, tr, 0.5 * h, dw1, depth + 1, normal);
            if (first != Outcome::ok) return first;
            return advance(x, tr, 0.5 * h, Eigen::VectorXd(dw - dw1), depth + 1, normal);
        }
        const Eigen::VectorXd noise = sigma * dw;
        Eigen::VectorXd y(d_);
        if (log_euler_) {
            for (std::size_t i = 0; i < d_; ++i) {
                const double xi = x(i);
                y(i) = xi * std::exp((b(i) / xi - 0.5 * cm(i, i) / (xi * xi)) * h + noise(i) / xi);
            }
        } else {
            y = x + b * h + noise;
        }
        const std::span<const double> ys(y.data(), d_);
        tr.t += h;
        if (!y.allFinite() || !domain_.contains(ys)) return Outcome::absorbed;
        if (y.cwiseAbs().maxCoeff() > cfg_.outer_radius) return Outcome::outer;
        x = y;
        mark_levels(std::span<const double>(x.data(), d_), tr);
        return Outcome::ok;
    }

private:
    const Measure& m_;
    const DomainSpec& domain_;
    const CovarianceField& c_;
    const SimConfig& cfg_;
    std::size_t d_;
    bool log_euler_;
};

void record_outcome(PathEnsemble& ens, std::size_t p, Outcome o, double t, Track& tr) {
    ens.absorbed[p] = 1;
    ens.exit_time[p] = t;
    if (o == Outcome::outer) ens.outer_hit[p] = 1;
    if (o == Outcome::sigma) ens.sigma_failure[p] = 1;
    if (tr.level_exit) {
        while (tr.next_level < tr.levels) tr.level_exit[tr.next_level++] = t;
    }
}

template <class Kernel, class State>
void run_paths(const Kernel& kernel, PathEnsemble& ens, const SimConfig& cfg, const Point& x0,
               std::size_t begin, std::size_t end, const std::vector<std::size_t>& record_steps,
               State init) {
    const std::size_t d = ens.dim;
    const std::size_t records = record_steps.size();
    const double sqdt = std::sqrt(ens.dt);
    for (std::size_t p = begin; p < end; ++p) {
        PhiloxEngine eng(cfg.seed, p);
        boost::random::normal_distribution<double> nd;
        auto normal = [&] { return nd(eng); };
        State x = init;
        Track tr;
        tr.levels = ens.levels;
        tr.level_exit = ens.levels > 0 ? &ens.level_exit[p * static_cast<std::size_t>(ens.levels)]
                                       : nullptr;
        double* out = &ens.states[p * records * d];
        std::fill(out, out + records * d, kNaN);
        for (std::size_t i = 0; i < d; ++i) out[i] = x0[i];
        kernel.mark_levels(std::span<const double>(x0.data(), d), tr);
        std::size_t next_record = 1;
        bool alive = true;
        for (std::size_t k = 1; k <= ens.steps && alive; ++k) {
            const double t_start = tr.t;
            Outcome o;
            if constexpr (std::is_same_v<State, double>) {
                o = kernel.advance(x, tr, ens.dt, sqdt * normal(), 0, normal);
            } else {
                Eigen::VectorXd dw(static_cast<Eigen::Index>(d));
                for (std::size_t i = 0; i < d; ++i) dw(i) = sqdt * normal();
                o = kernel.advance(x, tr, ens.dt, dw, 0, normal);
            }
            // keep the clock on the nominal grid once the step is complete
            if (o == Outcome::ok) tr.t = k * ens.dt;
            if (o != Outcome::ok) {
                record_outcome(ens, p, o, std::min(tr.t, t_start + ens.dt), tr);
                alive = false;
                break;
            }
            if (next_record < records && record_steps[next_record] == k) {
                double* row = out + next_record * d;
                if constexpr (std::is_same_v<State, double>) {
                    row[0] = x;
                } else {
                    for (std::size_t i = 0; i < d; ++i) row[i] = x(static_cast<Eigen::Index>(i));
                }
                ++next_record;
            }
        }
        double* last = &ens.last_state[p * d];
        if constexpr (std::is_same_v<State, double>) {
            last[0] = x;
        } else {
            for (std::size_t i = 0; i < d; ++i) last[i] = x(static_cast<Eigen::Index>(i));
        }
    }
}

template <class Fn>
void parallel_chunks(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
        const std::size_t b = std::min(n, w * chunk);
        const std::size_t e = std::min(n, b + chunk);
        pool.emplace_back([&, w, b, e] {
            try {
                fn(b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void fnv(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError(kModule, "dt must be > 0");
    if (!(T >= dt) || !std::isfinite(T)) throw PreconditionError(kModule, "T must be >= dt");
    if (n_paths < 1) throw PreconditionError(kModule, "n_paths must be >= 1");
    if (absorb_level < 0) throw PreconditionError(kModule, "absorb_level must be >= 0");
    if (max_refine < 0 || max_refine > 30) {
        throw PreconditionError(kModule, "max_refine must lie in [0, 30]");
    }
    if (threads < 1) throw PreconditionError(kModule, "threads must be >= 1");
    if (!(outer_radius > 0.0)) throw PreconditionError(kModule, "outer_radius must be > 0");
}

Measure Measure::q() { return Measure{}; }

Measure Measure::pstar(Eigenpair pair) {
    Measure m;
    m.kind = Kind::pstar;
    m.pair = std::move(pair);
    return m;
}

Measure Measure::with_drift(DriftField b) {
    Measure m;
    m.kind = Kind::drift;
    m.drift = std::move(b);
    return m;
}

std::string Measure::name() const {
    switch (kind) {
        case Kind::q: return "Q";
        case Kind::pstar: return "Pstar";
        case Kind::drift: return "drift:" + drift.name;
    }
    return "Q";
}

std::span<const double> PathEnsemble::state(std::size_t path, std::size_t record) const {
    if (path >= n_paths || record >= records()) throw RangeError(kModule, "state index out of range");
    return {&states[(path * records() + record) * dim], dim};
}

std::span<const double> PathEnsemble::final_state(std::size_t path) const {
    return state(path, records() - 1);
}

std::span<const double> PathEnsemble::last_valid_state(std::size_t path) const {
    if (path >= n_paths) throw RangeError(kModule, "path index out of range");
    return {&last_state[path * dim], dim};
}

double PathEnsemble::level_exit_time(std::size_t path, int level) const {
    if (path >= n_paths || level < 0 || level >= levels) {
        throw RangeError(kModule, "level exit index out of range");
    }
    return level_exit[path * static_cast<std::size_t>(levels) + static_cast<std::size_t>(level)];
}

std::size_t PathEnsemble::absorbed_count() const {
    return static_cast<std::size_t>(std::count(absorbed.begin(), absorbed.end(), 1));
}

std::uint64_t PathEnsemble::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double v : states) fnv(h, std::bit_cast<std::uint64_t>(v));
    for (double v : exit_time) fnv(h, std::bit_cast<std::uint64_t>(v));
    for (double v : level_exit) fnv(h, std::bit_cast<std::uint64_t>(v));
    for (std::size_t i = 0; i < n_paths; ++i) {
        fnv(h, absorbed[i] | (outer_hit[i] << 1) | (sigma_failure[i] << 2));
    }
    return h;
}

PathEnsemble simulate(const Measure& measure, const DomainSpec& domain, const CovarianceField& c,
                      const Point& x0, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t d = domain.dim();
    if (c.dim != d || x0.size() != d) {
        throw PreconditionError(kModule, "dimension mismatch between domain, covariance and x0");
    }
    if (cfg.absorb_level >= domain.exhaustion_count()) {
        throw PreconditionError(kModule, "absorb_level must be < exhaustion_count");
    }
    if (!domain.member(cfg.absorb_level, x0)) {
        throw PreconditionError(kModule, "x0 must lie in E_{absorb_level}");
    }
    if (cfg.scheme == Scheme::log_euler && domain.kind() != DomainKind::orthant) {
        throw PreconditionError(kModule, "log_euler scheme requires an orthant domain");
    }
    if (measure.kind == Measure::Kind::pstar && measure.pair.dim != d) {
        throw PreconditionError(kModule, "eigenpair dimension does not match the domain");
    }
    if (measure.kind == Measure::Kind::drift && (measure.drift.dim != d || !measure.drift.eval)) {
        throw PreconditionError(kModule, "drift dimension does not match the domain");
    }

    PathEnsemble ens;
    ens.n_paths = cfg.n_paths;
    ens.dim = d;
    ens.T = cfg.T;
    ens.steps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
    ens.dt = cfg.T / static_cast<double>(ens.steps);
    ens.record_every = cfg.record_every;
    ens.levels = cfg.track_levels ? domain.exhaustion_count() : 0;
    ens.domain = domain;
    ens.record_steps.push_back(0);
    if (cfg.record_every > 0) {
        for (std::size_t k = cfg.record_every; k < ens.steps; k += cfg.record_every) {
            ens.record_steps.push_back(k);
        }
    }
    ens.record_steps.push_back(ens.steps);
    for (std::size_t k : ens.record_steps) ens.times.push_back(static_cast<double>(k) * ens.dt);

    const std::size_t n = cfg.n_paths;
    ens.states.assign(n * ens.records() * d, kNaN);
    ens.last_state.assign(n * d, kNaN);
    ens.exit_time.assign(n, kNeverExited);
    ens.level_exit.assign(n * static_cast<std::size_t>(ens.levels), kNeverExited);
    ens.absorbed.assign(n, 0);
    ens.outer_hit.assign(n, 0);
    ens.sigma_failure.assign(n, 0);

    if (d == 1 && c.scalar && (measure.kind != Measure::Kind::pstar || measure.pair.dlog1) &&
        (measure.kind != Measure::Kind::drift || measure.drift.scalar)) {
        const Kernel1D kernel(measure, domain, c, cfg);
        parallel_chunks(n, cfg.threads, [&](std::size_t b, std::size_t e) {
            run_paths(kernel, ens, cfg, x0, b, e, ens.record_steps, x0[0]);
        });
    } else {
        const KernelND kernel(measure, domain, c, cfg);
        const Eigen::VectorXd init =
            Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(d));
        parallel_chunks(n, cfg.threads, [&](std::size_t b, std::size_t e) {
            run_paths(kernel, ens, cfg, x0, b, e, ens.record_steps, init);
        });
    }
    return ens;
}

Estimate exit_probability(const PathEnsemble& ens, double T) {
    if (!(T >= 0.0) || T > ens.T * (1.0 + 1e-12)) {
        throw PreconditionError(kModule, "T must lie in [0, ensemble horizon]");
    }
    std::size_t survivors = 0;
    for (double z : ens.exit_time) survivors += z > T ? 1 : 0;
    const double n = static_cast<double>(ens.n_paths);
    const double p = static_cast<double>(survivors) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

ExitIdentityResult exit_identity_check(const DomainSpec& domain, const CovarianceField& c,
                                       const Eigenpair& pair, const Point& x0, double T,
                                       const SimConfig& cfg) {
    ExitIdentityResult r;
    if (T == 0.0) return r;
    SimConfig qcfg = cfg;
    qcfg.T = T;
    qcfg.record_every = 0;
    const PathEnsemble q = simulate(Measure::q(), domain, c, x0, qcfg);
    const Estimate lhs = exit_probability(q, T);

    SimConfig pcfg = qcfg;
    pcfg.seed = cfg.seed ^ 0x9e3779b97f4a7c15ull;
    const PathEnsemble ps = simulate(Measure::pstar(pair), domain, c, x0, pcfg);
    if (ps.absorbed_count() > 0) {
        throw HypothesisError(kModule, std::to_string(ps.absorbed_count()) +
                                           " Pstar paths absorbed; the identity assumes "
                                           "Pstar[zeta < inf] = 0");
    }
    const double eta0 = pair.eta(x0);
    const double decay = std::exp(-pair.lambda * T);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t p = 0; p < ps.n_paths; ++p) {
        const double v = eta0 * decay / pair.eta(ps.final_state(p));
        sum += v;
        sum2 += v * v;
    }
    const double n = static_cast<double>(ps.n_paths);
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean) * n / std::max(1.0, n - 1.0);
    r.lhs = lhs.value;
    r.lhs_se = lhs.std_error;
    r.rhs = mean;
    r.rhs_se = std::sqrt(var / n);
    r.combined_se = std::hypot(r.lhs_se, r.rhs_se);
    r.pass = std::abs(r.lhs - r.rhs) <= 3.0 * r.combined_se;
    return r;
}

TailDecay tail_decay_estimate(const DomainSpec& domain, const CovarianceField& c,
                              const Eigenpair& pair, const Point& x0,
                              const std::vector<double>& T_list, const SimConfig& cfg) {
    if (T_list.empty()) throw PreconditionError(kModule, "T_list must not be empty");
    for (std::size_t i = 0; i < T_list.size(); ++i) {
        if (!(T_list[i] > 0.0) || (i > 0 && !(T_list[i] > T_list[i - 1]))) {
            throw PreconditionError(kModule, "T_list must be positive and increasing");
        }
    }
    TailDecay out;
    std::vector<double> usable;
    const double n = static_cast<double>(cfg.n_paths);
    for (double T : T_list) {
        if (std::exp(-pair.lambda * T) * n < 100.0) {
            out.warnings.push_back("dropped T = " + std::to_string(T) +
                                   ": fewer than 100 expected survivors");
            continue;
        }
        usable.push_back(T);
    }
    if (usable.empty()) return out;
    SimConfig qcfg = cfg;
    qcfg.T = usable.back();
    qcfg.record_every = 0;
    const PathEnsemble q = simulate(Measure::q(), domain, c, x0, qcfg);
    for (double T : usable) {
        const Estimate e = exit_probability(q, T);
        const double scale = std::exp(pair.lambda * T);
        out.points.push_back({T, scale * e.value, scale * e.std_error});
    }
    const std::size_t half = out.points.size() / 2;
    double lo = kNeverExited, hi = 0.0;
    for (std::size_t i = half; i < out.points.size(); ++i) {
        lo = std::min(lo, out.points[i].scaled);
        hi = std::max(hi, out.points[i].scaled);
    }
    out.flatness = lo > 0.0 ? hi / lo : kNeverExited;
    return out;
}

}  // namespace eigengrowth
