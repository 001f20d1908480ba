#include "qse/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qse {

namespace {

constexpr std::size_t kMaxTensorSize = std::size_t(1) << 24;

double poisson_pmf(double lambda, int k) {
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

void check_truncation(const MultimodeState& st, const HeraldOptions& opt) {
    for (int m = 0; m < st.mode_count; ++m) {
        const double p = st.top_level_probability(m);
        if (p > opt.truncation_tol)
            throw std::runtime_error("truncation overflow: mode " + std::to_string(m) +
                                     " holds probability " + std::to_string(p) +
                                     " in its top occupation level");
    }
}

}  // namespace

void DetectorModel::validate() const {
    if (efficiency < 0.0 || efficiency > 1.0)
        throw std::invalid_argument("detector efficiency: must be in [0, 1]");
    if (dark_count_prob < 0.0 || dark_count_prob >= 1.0)
        throw std::invalid_argument("detector dark_count_prob: must be in [0, 1)");
}

std::vector<double> DetectorModel::click_weights(int n_max, double extra_intensity) const {
    validate();
    std::vector<double> w(n_max + 1);
    const double nu = efficiency;
    const double d = dark_count_prob;
    if (kind == DetectorKind::SinglePhotonPerturbative) {
        // Photon click projects onto exactly one detected photon; an extra
        // background photon can substitute for a missing signal photon.
        for (int n = 0; n <= n_max; ++n) {
            const double p_photon = (n <= 1) ? nu * poisson_pmf(extra_intensity, 1 - n) : 0.0;
            w[n] = d + (1.0 - d) * p_photon;
        }
    } else {
        // E_click = I - (1-d)(1-nu)^n, with Poisson background marginalized:
        // sum_k P(k) (1-nu)^{n+k} = (1-nu)^n e^{-nu lambda}.
        const double bg = std::exp(-nu * extra_intensity);
        for (int n = 0; n <= n_max; ++n)
            w[n] = 1.0 - (1.0 - d) * std::pow(1.0 - nu, n) * bg;
    }
    return w;
}

MultimodeState MultimodeState::vacuum(int modes, int n_max) {
    if (modes < 1 || n_max < 1) throw std::invalid_argument("vacuum: bad dimensions");
    MultimodeState st;
    st.mode_count = modes;
    st.local_dim = n_max + 1;
    std::size_t total = 1;
    for (int m = 0; m < modes; ++m) total *= st.local_dim;
    st.amps.assign(total, Complex(0));
    st.amps[0] = 1.0;
    return st;
}

std::size_t MultimodeState::stride(int mode) const {
    std::size_t s = 1;
    for (int m = mode_count - 1; m > mode; --m) s *= local_dim;
    return s;
}

double MultimodeState::norm2() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

Complex& MultimodeState::at(const std::vector<int>& occ) {
    std::size_t idx = 0;
    for (int m = 0; m < mode_count; ++m) idx = idx * local_dim + occ[m];
    return amps[idx];
}

Complex MultimodeState::at(const std::vector<int>& occ) const {
    return const_cast<MultimodeState*>(this)->at(const_cast<std::vector<int>&>(occ));
}

double MultimodeState::top_level_probability(int mode) const {
    const std::size_t s = stride(mode);
    const std::size_t block = s * local_dim;
    double num = 0.0;
    for (std::size_t base = 0; base < amps.size(); base += block)
        for (std::size_t k = 0; k < s; ++k) num += std::norm(amps[base + s * (local_dim - 1) + k]);
    const double den = norm2();
    return den > 0.0 ? num / den : 0.0;
}

MultimodeState spdc_state(double gamma, int n_max, int order, bool normalized) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma: must be in [0, 1)");
    if (order < 1 || order > n_max) throw std::invalid_argument("spdc order: must be in [1, n_max]");
    MultimodeState st = MultimodeState::vacuum(2, n_max);
    double g = 1.0;
    for (int n = 0; n <= order; ++n) {
        st.amps[static_cast<std::size_t>(n) * st.local_dim + n] = g;
        g *= gamma;
    }
    if (normalized) {
        const double norm = std::sqrt(st.norm2());
        for (auto& a : st.amps) a /= norm;
    }
    return st;
}

MultimodeState apply_beamsplitter(const MultimodeState& state, int mode_a, int mode_b,
                                  double transmissivity, BsConvention convention) {
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= state.mode_count ||
        mode_b >= state.mode_count)
        throw std::invalid_argument("apply_beamsplitter: invalid mode index");
    if (transmissivity < 0.0 || transmissivity > 1.0)
        throw std::invalid_argument("apply_beamsplitter: transmissivity must be in [0, 1]");

    const int dim = state.local_dim;
    const double ct = std::sqrt(transmissivity);
    const double cr = std::sqrt(1.0 - transmissivity);
    // S = [[tc, rc], [rp, tp]] with a' = tc a + rc b, b' = rp a + tp b.
    Complex tc, rc, rp, tp;
    if (convention == BsConvention::RealSymmetric) {
        tc = ct; rc = cr; rp = cr; tp = -ct;
    } else {
        tc = ct; rc = Complex(0, cr); rp = Complex(0, cr); tp = ct;
    }

    // Two-mode block transform: U|na,nb> expanded over creation operators,
    //   U a^dag U^dag = S_aa a^dag + S_ba b^dag,  U b^dag U^dag = S_ab a^dag + S_bb b^dag.
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
    for (int na = 0; na < dim; ++na) {
        for (int nb = 0; nb < dim; ++nb) {
            const double src_norm = std::sqrt(factorial(na) * factorial(nb));
            for (int j = 0; j <= na; ++j) {
                for (int k = 0; k <= nb; ++k) {
                    const int out_a = j + k;
                    const int out_b = na + nb - j - k;
                    if (out_a >= dim || out_b >= dim) continue;  // truncation drop
                    const Complex coeff = binomial(na, j) * binomial(nb, k) *
                                          std::pow(tc, j) * std::pow(rp, na - j) *
                                          std::pow(rc, k) * std::pow(tp, nb - k) *
                                          std::sqrt(factorial(out_a) * factorial(out_b)) /
                                          src_norm;
                    T(out_a * dim + out_b, na * dim + nb) += coeff;
                }
            }
        }
    }

    MultimodeState out = state;
    const std::size_t sa = state.stride(mode_a);
    const std::size_t sb = state.stride(mode_b);
    Eigen::VectorXcd in_block(dim * dim), out_block(dim * dim);
    for (std::size_t f = 0; f < state.amps.size(); ++f) {
        const int na = static_cast<int>(f / sa) % dim;
        const int nb = static_cast<int>(f / sb) % dim;
        if (na != 0 || nb != 0) continue;  // f indexes a base configuration
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) in_block[i * dim + j] = state.amps[f + i * sa + j * sb];
        out_block = T * in_block;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out.amps[f + i * sa + j * sb] = out_block[i * dim + j];
    }
    return out;
}

MultimodeState inject_ancilla(const MultimodeState& state, Complex alpha) {
    const int n_max = state.local_dim - 1;
    const CoherentState coh = coherent_fock(alpha, std::max(2, n_max));
    if (coh.norm_deficit > 1e-6)
        throw std::runtime_error("inject_ancilla: truncation overflow on mode " +
                                 std::to_string(state.mode_count) + " (coherent norm deficit " +
                                 std::to_string(coh.norm_deficit) + ")");
    if (state.amps.size() * state.local_dim > kMaxTensorSize)
        throw std::runtime_error("inject_ancilla: tensor for mode " +
                                 std::to_string(state.mode_count) + " exceeds the memory budget");

    MultimodeState out;
    out.mode_count = state.mode_count + 1;
    out.local_dim = state.local_dim;
    out.amps.resize(state.amps.size() * state.local_dim);
    std::size_t idx = 0;
    for (const auto& a : state.amps)
        for (int n = 0; n < state.local_dim; ++n) out.amps[idx++] = a * coh.amps[std::min(n, n_max)];
    return out;
}

ClickReduction click_reduce(const MultimodeState& state, int mode, const DetectorModel& det,
                            double extra_intensity) {
    if (mode < 0 || mode >= state.mode_count)
        throw std::invalid_argument("click_reduce: invalid mode index");
    const int dim = state.local_dim;
    const std::vector<double> w = det.click_weights(dim - 1, extra_intensity);

    const std::size_t s = state.stride(mode);
    const std::size_t block = s * dim;
    ClickReduction out;
    for (int n = 0; n < dim; ++n) {
        if (w[n] <= 0.0) continue;
        MultimodeState br;
        br.mode_count = state.mode_count - 1;
        br.local_dim = dim;
        br.amps.reserve(state.amps.size() / dim);
        const double scale = std::sqrt(w[n]);
        for (std::size_t base = 0; base < state.amps.size(); base += block)
            for (std::size_t k = 0; k < s; ++k)
                br.amps.push_back(scale * state.amps[base + s * n + k]);
        const double br_weight = br.norm2();
        if (br_weight == 0.0) continue;
        out.weight += br_weight;
        out.branches.push_back(std::move(br));
    }
    return out;
}

DensityMatrix reduce_to_density(const MultimodeState& state, int keep_mode) {
    if (keep_mode < 0 || keep_mode >= state.mode_count)
        throw std::invalid_argument("reduce_to_density: invalid mode index");
    const int dim = state.local_dim;
    const std::size_t s = state.stride(keep_mode);
    const std::size_t block = s * dim;
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    for (std::size_t base = 0; base < state.amps.size(); base += block) {
        for (std::size_t k = 0; k < s; ++k) {
            for (int m = 0; m < dim; ++m) {
                const Complex am = state.amps[base + s * m + k];
                if (am == Complex(0)) continue;
                for (int n = 0; n < dim; ++n)
                    rho(m, n) += am * std::conj(state.amps[base + s * n + k]);
            }
        }
    }
    return rho;
}

namespace {

// Shared coincidence pipeline. Detector background intensities model
// distinguishable (mode-mismatched) ancilla light reaching the SPCMs.
HeraldResult herald_coincidence_impl(Complex alpha, Complex beta, double gamma,
                                     const DetectorModel& det, const HeraldOptions& opt,
                                     double extra1, double extra2, bool click_spcm1) {
    det.validate();
    auto st = spdc_state(gamma, opt.n_max, opt.spdc_order, /*normalized=*/true);
    st = inject_ancilla(st, alpha);                                   // mode 2: ancilla A
    st = apply_beamsplitter(st, 1, 2, 0.5, opt.geometry.convention);  // BS1 on (idler, A)
    const int d1_slot = opt.geometry.spcm1_on_idler_port ? 1 : 2;
    const int cont_slot = d1_slot == 1 ? 2 : 1;
    check_truncation(st, opt);

    std::vector<MultimodeState> branches1;
    if (click_spcm1) {
        branches1 = click_reduce(st, d1_slot, det, extra1).branches;
    } else {
        // SPCM1 unmonitored: keep every occupation branch with weight 1 (trace-out).
        const std::size_t s = st.stride(d1_slot);
        const std::size_t block = s * st.local_dim;
        for (int n = 0; n < st.local_dim; ++n) {
            MultimodeState br;
            br.mode_count = st.mode_count - 1;
            br.local_dim = st.local_dim;
            br.amps.reserve(st.amps.size() / st.local_dim);
            for (std::size_t base = 0; base < st.amps.size(); base += block)
                for (std::size_t k = 0; k < s; ++k) br.amps.push_back(st.amps[base + s * n + k]);
            if (br.norm2() == 0.0) continue;
            branches1.push_back(std::move(br));
        }
    }

    const int cont_after = cont_slot > d1_slot ? cont_slot - 1 : cont_slot;
    const int dim = opt.n_max + 1;
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    for (const auto& b1 : branches1) {
        auto sb = inject_ancilla(b1, beta);                                       // mode 2: ancilla B
        sb = apply_beamsplitter(sb, cont_after, 2, 0.5, opt.geometry.convention);  // BS2
        check_truncation(sb, opt);
        const int d2_slot = opt.geometry.spcm2_on_mixed_port ? cont_after : 2;
        for (const auto& b2 : click_reduce(sb, d2_slot, det, extra2).branches)
            rho += reduce_to_density(b2, 0);  // remaining non-signal mode is the monitor port
    }
    const double p = std::real(rho.trace());
    if (!(p > 0.0)) throw std::runtime_error("herald: zero coincidence probability");
    return {rho / p, p};
}

}  // namespace

HeraldResult herald_signal_with_background(Complex alpha, Complex beta, double gamma,
                                           const DetectorModel& det, const HeraldOptions& opt,
                                           double extra_spcm1, double extra_spcm2) {
    return herald_coincidence_impl(alpha, beta, gamma, det, opt, extra_spcm1, extra_spcm2, true);
}

HeraldResult herald_signal(Complex alpha, Complex beta, double gamma, const DetectorModel& det,
                           const HeraldOptions& opt) {
    return herald_signal_with_background(alpha, beta, gamma, det, opt, 0.0, 0.0);
}

HeraldResult herald_spcm2_singles(Complex alpha, Complex beta, double gamma,
                                  const DetectorModel& det, const HeraldOptions& opt,
                                  double extra_spcm2) {
    return herald_coincidence_impl(alpha, beta, gamma, det, opt, 0.0, extra_spcm2, false);
}

HeraldResult herald_singles_with_background(Complex alpha, double gamma, const DetectorModel& det,
                                            const HeraldOptions& opt, double extra_spcm1) {
    det.validate();
    auto st = spdc_state(gamma, opt.n_max, opt.spdc_order, /*normalized=*/true);
    st = inject_ancilla(st, alpha);
    st = apply_beamsplitter(st, 1, 2, 0.5, opt.geometry.convention);
    const int d1_slot = opt.geometry.spcm1_on_idler_port ? 1 : 2;
    check_truncation(st, opt);

    const int dim = opt.n_max + 1;
    DensityMatrix rho = DensityMatrix::Zero(dim, dim);
    for (const auto& b : click_reduce(st, d1_slot, det, extra_spcm1).branches)
        rho += reduce_to_density(b, 0);
    const double p = std::real(rho.trace());
    if (!(p > 0.0)) throw std::runtime_error("herald: zero click probability");
    return {rho / p, p};
}

HeraldResult herald_singles(Complex alpha, double gamma, const DetectorModel& det,
                            const HeraldOptions& opt) {
    return herald_singles_with_background(alpha, gamma, det, opt, 0.0);
}

Eq2Amplitudes eq2_amplitudes(Complex alpha, Complex beta, double gamma) {
    Eq2Amplitudes out;
    out.a0 = -alpha * alpha / (2.0 * std::sqrt(2.0)) + alpha * beta / 2.0;
    out.a1 = beta * gamma / 2.0;
    out.a2 = gamma * gamma / 2.0;
    FockVector v(3);
    v << out.a0, out.a1, out.a2;
    out.normalized = normalize(v);  // throws "null state" when all three vanish
    return out;
}

FockVector singles_heralded_state(Complex alpha, double gamma) {
    FockVector v(3);
    v << alpha, gamma, 0.0;
    return normalize(v);
}

}  // namespace qse
