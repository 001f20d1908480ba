#include "qse/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "qse/rng.hpp"

namespace qse {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_pi(double x) {
    x = std::fmod(x + kPi, 2.0 * kPi);
    if (x < 0) x += 2.0 * kPi;
    return x - kPi;
}

}  // namespace

Eigen::VectorXd quad_wavefunctions(int n_max, double q) {
    Eigen::VectorXd psi(n_max + 1);
    psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * q * q);
    if (n_max >= 1) psi[1] = std::sqrt(2.0) * q * psi[0];
    for (int n = 2; n <= n_max; ++n)
        psi[n] = q * std::sqrt(2.0 / n) * psi[n - 1] - std::sqrt((n - 1.0) / n) * psi[n - 2];
    return psi;
}

double quad_wavefunction(int n, double q) {
    if (n < 0) throw std::invalid_argument("quad_wavefunction: negative order");
    return quad_wavefunctions(n, q)[n];
}

double quad_pdf(const DensityMatrix& rho, double phi, double q) {
    const int n_max = static_cast<int>(rho.rows()) - 1;
    const Eigen::VectorXd psi = quad_wavefunctions(n_max, q);
    Eigen::VectorXcd w(n_max + 1);
    for (int n = 0; n <= n_max; ++n) w[n] = psi[n] * std::exp(Complex(0, n * phi));
    return std::real(Complex(w.adjoint() * rho * w));
}

QuadratureSampler::QuadratureSampler(DensityMatrix rho, double q_min, double q_max, int q_points,
                                     int phase_bins)
    : phase_bins_(phase_bins), cache_(phase_bins) {
    if (q_points < 16 || phase_bins < 1 || q_max <= q_min)
        throw std::invalid_argument("QuadratureSampler: bad grid parameters");
    const int dim = static_cast<int>(rho.rows());
    grid_.resize(q_points);
    const double dq = (q_max - q_min) / (q_points - 1);
    for (int i = 0; i < q_points; ++i) grid_[i] = q_min + i * dq;

    // p(q|phi) = c_0(q) + 2 Re sum_{k>=1} e^{i k phi} c_k(q),
    // c_k(q) = sum_m rho_{m,m+k} psi_m(q) psi_{m+k}(q).
    harmonics_ = Eigen::MatrixXcd::Zero(dim, q_points);
    for (int i = 0; i < q_points; ++i) {
        const Eigen::VectorXd psi = quad_wavefunctions(dim - 1, grid_[i]);
        for (int k = 0; k < dim; ++k) {
            Complex c(0);
            for (int m = 0; m + k < dim; ++m) c += rho(m, m + k) * psi[m] * psi[m + k];
            harmonics_(k, i) = c;
        }
    }
}

std::vector<double> QuadratureSampler::build_cdf(double phi) const {
    const int dim = static_cast<int>(harmonics_.rows());
    const int n = static_cast<int>(grid_.size());
    std::vector<double> pdf(n);
    Eigen::VectorXcd phase(dim);
    for (int k = 0; k < dim; ++k) phase[k] = std::exp(Complex(0, k * phi));
    for (int i = 0; i < n; ++i) {
        double p = std::real(harmonics_(0, i));
        for (int k = 1; k < dim; ++k) p += 2.0 * std::real(phase[k] * harmonics_(k, i));
        pdf[i] = std::max(p, 0.0);
    }
    std::vector<double> cdf(n);
    cdf[0] = 0.0;
    for (int i = 1; i < n; ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (pdf[i] + pdf[i - 1]) * (grid_[i] - grid_[i - 1]);
    const double total = cdf.back();
    if (!(total > 0.0)) throw std::runtime_error("QuadratureSampler: degenerate distribution");
    for (auto& c : cdf) c /= total;
    return cdf;
}

double QuadratureSampler::invert(const std::vector<double>& cdf, double u) const {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return grid_.front();
    if (it == cdf.end()) return grid_.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double lo = cdf[i - 1], hi = cdf[i];
    const double f = hi > lo ? (u - lo) / (hi - lo) : 1.0;
    return grid_[i - 1] + f * (grid_[i] - grid_[i - 1]);
}

double QuadratureSampler::sample(double phi, double u01) const {
    const double w = wrap_pi(phi) + kPi;  // [0, 2 pi)
    int bin = static_cast<int>(w / (2.0 * kPi) * phase_bins_);
    bin = std::min(bin, phase_bins_ - 1);
    if (cache_[bin].empty())
        cache_[bin] = build_cdf((bin + 0.5) * 2.0 * kPi / phase_bins_ - kPi);
    return invert(cache_[bin], u01);
}

double QuadratureSampler::sample_at(double phi, double u01) const {
    if (exact_cdf_.empty() || exact_phi_ != phi) {
        exact_cdf_ = build_cdf(phi);
        exact_phi_ = phi;
    }
    return invert(exact_cdf_, u01);
}

std::vector<double> sample_quadrature(const DensityMatrix& rho, double phi, std::uint64_t seed,
                                      std::size_t count) {
    QuadratureSampler sampler(rho);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = sampler.sample_at(phi, keyed_u01(seed, Stream::QuadPrimary, i));
    return out;
}

AcquisitionDataset simulate_acquisition(const DensityMatrix& rho_primary, Trigger primary_tag,
                                        const DensityMatrix& rho_spcm1,
                                        const DensityMatrix& rho_spcm2, const Rates& rates,
                                        double duration, const PhaseTrajectory& drift,
                                        std::uint64_t seed) {
    if (!(rates.coincidence_hz > 0.0) || !(rates.singles_hz > 0.0))
        throw std::invalid_argument("rates: must be > 0");
    if (!(duration >= 0.0)) throw std::invalid_argument("duration: must be >= 0");
    if (drift.times.empty()) throw std::invalid_argument("empty trajectory");

    struct StreamSpec {
        Trigger tag;
        double rate;
        Stream time_stream;
        Stream quad_stream;
        const DensityMatrix* rho;
    };
    const StreamSpec specs[3] = {
        {primary_tag, rates.coincidence_hz, Stream::CoincidenceTimes, Stream::QuadPrimary,
         &rho_primary},
        {Trigger::Spcm1, rates.singles_hz / 2.0, Stream::Spcm1Times, Stream::QuadSpcm1,
         &rho_spcm1},
        {Trigger::Spcm2, rates.singles_hz / 2.0, Stream::Spcm2Times, Stream::QuadSpcm2,
         &rho_spcm2},
    };

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<QuadratureRecord> streams[3];
    for (int s = 0; s < 3; ++s) {
        const auto& spec = specs[s];
        QuadratureSampler sampler(*spec.rho);
        Rng rng(stream_seed(seed, spec.time_stream, 0));
        double t = rng.exponential(spec.rate);
        std::uint64_t idx = 0;
        while (t < duration) {
            const double phi = drift.at(t);
            const double u = keyed_u01(seed, spec.quad_stream, idx);
            streams[s].push_back({t, sampler.sample(phi, u), spec.tag, phi, nan});
            t += rng.exponential(spec.rate);
            ++idx;
        }
    }

    AcquisitionDataset ds;
    ds.seed = seed;
    ds.records.reserve(streams[0].size() + streams[1].size() + streams[2].size());
    std::size_t pos[3] = {0, 0, 0};
    while (true) {
        int best = -1;
        for (int s = 0; s < 3; ++s) {
            if (pos[s] >= streams[s].size()) continue;
            if (best < 0 || streams[s][pos[s]].time < streams[best][pos[best]].time) best = s;
        }
        if (best < 0) break;
        ds.records.push_back(streams[best][pos[best]++]);
    }
    return ds;
}

Complex expect_a(const DensityMatrix& rho) {
    Complex s(0);
    for (int m = 1; m < rho.rows(); ++m) s += std::sqrt(static_cast<double>(m)) * rho(m, m - 1);
    return s;
}

namespace {

struct WindowStats {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    double mean() const { return sum / count; }
    // variance of the window mean
    double mean_var() const {
        if (count < 2) return 1e-12;
        const double v = (sumsq - sum * sum / count) / (count - 1.0);
        return std::max(v, 1e-12) / count;
    }
};

double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

void estimate_phase(AcquisitionDataset& dataset, const PhaseEstimateOptions& opts) {
    if (dataset.records.empty()) throw std::invalid_argument("estimate_phase: empty dataset");
    if (!(opts.window_s > 0.0)) throw std::invalid_argument("window_s: must be > 0");

    struct Envelope {
        Trigger tag;
        double amp;    // sqrt(2) |<a>|
        double theta;  // arg <a>
    };
    std::vector<Envelope> envelopes;
    if (std::abs(opts.envelope_a_spcm1) > 1e-9)
        envelopes.push_back({Trigger::Spcm1, std::sqrt(2.0) * std::abs(opts.envelope_a_spcm1),
                             std::arg(opts.envelope_a_spcm1)});
    if (std::abs(opts.envelope_a_spcm2) > 1e-9)
        envelopes.push_back({Trigger::Spcm2, std::sqrt(2.0) * std::abs(opts.envelope_a_spcm2),
                             std::arg(opts.envelope_a_spcm2)});
    if (envelopes.empty())
        throw std::invalid_argument(
            "estimate_phase: no phase-sensitive singles stream (quadrature mean envelope is "
            "zero)");

    const double t_end = dataset.records.back().time;
    const std::size_t n_windows =
        std::max<std::size_t>(1, static_cast<std::size_t>(t_end / opts.window_s));
    const auto window_of = [&](double t) {
        return std::min(n_windows - 1, static_cast<std::size_t>(t / opts.window_s));
    };

    const std::size_t n_env = envelopes.size();
    std::vector<std::vector<WindowStats>> stats(n_env, std::vector<WindowStats>(n_windows));
    for (const auto& r : dataset.records) {
        for (std::size_t s = 0; s < n_env; ++s) {
            if (r.trigger != envelopes[s].tag) continue;
            auto& w = stats[s][window_of(r.time)];
            w.sum += r.value;
            w.sumsq += r.value * r.value;
            ++w.count;
        }
    }

    for (std::size_t k = 0; k < n_windows; ++k) {
        std::size_t total = 0;
        for (std::size_t s = 0; s < n_env; ++s) total += stats[s][k].count;
        if (total < static_cast<std::size_t>(opts.min_records_per_window))
            throw std::runtime_error(
                "estimate_phase: window " + std::to_string(k) + " [" +
                std::to_string(k * opts.window_s) + " s, " +
                std::to_string((k + 1) * opts.window_s) + " s) contains " + std::to_string(total) +
                " singles records (minimum " + std::to_string(opts.min_records_per_window) + ")");
    }

    // Normalized misfit of the window means against the envelope model.
    const auto objective = [&](std::size_t k, double phi) {
        double g = 0.0;
        for (std::size_t s = 0; s < n_env; ++s) {
            const auto& w = stats[s][k];
            if (w.count == 0) continue;
            const double model = envelopes[s].amp * std::cos(phi - envelopes[s].theta);
            const double r = w.mean() - model;
            g += r * r / w.mean_var();
        }
        return g;
    };

    constexpr int kScan = 1024;
    const double margin_per_stream = 9.0;
    std::vector<double> centers(n_windows), est(n_windows);
    for (std::size_t k = 0; k < n_windows; ++k)
        centers[k] = (k + 0.5) * opts.window_s;

    for (std::size_t k = 0; k < n_windows; ++k) {
        const double base = (k == 0) ? -kPi : est[k - 1] - kPi;
        std::vector<double> g(kScan);
        for (int i = 0; i < kScan; ++i)
            g[i] = objective(k, base + (i + 0.5) * 2.0 * kPi / kScan);

        struct Candidate { double phi, g; };
        std::vector<Candidate> cands;
        for (int i = 0; i < kScan; ++i) {
            const int prev = (i + kScan - 1) % kScan;
            const int next = (i + 1) % kScan;
            if (g[i] < g[prev] && g[i] <= g[next]) {
                const double lo = base + (i - 0.5) * 2.0 * kPi / kScan;
                const double hi = base + (i + 1.5) * 2.0 * kPi / kScan;
                const double phi =
                    golden_min([&](double x) { return objective(k, x); }, lo, hi);
                cands.push_back({phi, objective(k, phi)});
            }
        }
        if (cands.empty()) cands.push_back({base + kPi, objective(k, base + kPi)});

        double g_best = cands[0].g;
        for (const auto& c : cands) g_best = std::min(g_best, c.g);
        const double margin = margin_per_stream * static_cast<double>(n_env);
        std::vector<Candidate> close;
        for (const auto& c : cands)
            if (c.g <= g_best + margin) close.push_back(c);

        double chosen;
        if (k == 0) {
            chosen = close.front().phi;
            if (close.size() > 1) {
                // Anchor the initial branch: the dominant stream's mean slope over
                // the first three windows fixes sign(sin(phi - theta)) under the
                // assumption of non-negative initial drift; on a flat slope the
                // sin >= 0 branch is the convention.
                std::size_t ref = 0;
                for (std::size_t s = 1; s < n_env; ++s)
                    if (envelopes[s].amp > envelopes[ref].amp) ref = s;
                const std::size_t m = std::min<std::size_t>(3, n_windows);
                double slope = 0.0, se = 1e9;
                if (m >= 2) {
                    const auto& w0 = stats[ref][0];
                    const auto& w1 = stats[ref][m - 1];
                    const double dt = (m - 1) * opts.window_s;
                    slope = (w1.mean() - w0.mean()) / dt;
                    se = std::sqrt(w1.mean_var() + w0.mean_var()) / dt;
                }
                int want_sign = 1;  // sin(phi - theta) >= 0
                if (slope > 2.0 * se) want_sign = -1;
                const double theta_ref = envelopes[ref].theta;
                double best_g = std::numeric_limits<double>::infinity();
                bool found = false;
                for (const auto& c : close) {
                    const int sgn = std::sin(c.phi - theta_ref) >= 0.0 ? 1 : -1;
                    if (sgn == want_sign && c.g < best_g) {
                        best_g = c.g;
                        chosen = c.phi;
                        found = true;
                    }
                }
                if (!found)
                    for (const auto& c : close)
                        if (c.g <= g_best) chosen = c.phi;
            }
        } else {
            // Continuity: nearest of the near-optimal minima, mapped next to the
            // previous window's estimate.
            const double prev = est[k - 1];
            double best_d = std::numeric_limits<double>::infinity();
            chosen = prev;
            for (auto c : close) {
                c.phi += 2.0 * kPi * std::round((prev - c.phi) / (2.0 * kPi));
                const double d = std::abs(c.phi - prev);
                if (d < best_d) {
                    best_d = d;
                    chosen = c.phi;
                }
            }
        }
        est[k] = chosen;
    }

    for (auto& r : dataset.records) {
        if (n_windows == 1 || r.time <= centers.front()) {
            r.est_phase = est.front();
        } else if (r.time >= centers.back()) {
            r.est_phase = est.back();
        } else {
            const auto it = std::upper_bound(centers.begin(), centers.end(), r.time);
            const std::size_t i = static_cast<std::size_t>(it - centers.begin());
            const double f = (r.time - centers[i - 1]) / (centers[i] - centers[i - 1]);
            r.est_phase = est[i - 1] + f * (est[i] - est[i - 1]);
        }
    }
}

}  // namespace qse
