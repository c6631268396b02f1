#include "acdc/ac_power_flow.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

namespace acdc {

namespace {

constexpr Complex kJ{0.0, 1.0};

}  // namespace

Ybus build_ybus(const CaseData& c, std::span<const double> taps, std::span<const double> shunt_q) {
    const auto n = static_cast<Eigen::Index>(c.buses.size());
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(c.branches.size() * 4 + c.buses.size());

    std::vector<double> ratio(c.branches.size());
    for (std::size_t k = 0; k < c.branches.size(); ++k) ratio[k] = c.branches[k].ratio;
    if (!taps.empty()) {
        const auto tapped = c.tap_branches();
        for (std::size_t k = 0; k < tapped.size() && k < taps.size(); ++k) ratio[tapped[k]] = taps[k];
    }

    for (std::size_t k = 0; k < c.branches.size(); ++k) {
        const auto& br = c.branches[k];
        const auto f = static_cast<Eigen::Index>(c.bus_index(br.from));
        const auto to = static_cast<Eigen::Index>(c.bus_index(br.to));
        const Complex ys = 1.0 / Complex(br.r, br.x);
        const Complex ytt = ys + kJ * (br.b_charging / 2.0);
        const double tap = ratio[k];
        t.emplace_back(f, f, ytt / (tap * tap));
        t.emplace_back(to, to, ytt);
        t.emplace_back(f, to, -ys / tap);
        t.emplace_back(to, f, -ys / tap);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& b = c.buses[static_cast<std::size_t>(i)];
        t.emplace_back(i, i, Complex(b.shunt_g, b.shunt_b));
    }
    for (std::size_t k = 0; k < c.shunts.size(); ++k) {
        const double q = k < shunt_q.size() ? shunt_q[k] : c.shunts[k].q;
        const auto i = static_cast<Eigen::Index>(c.bus_index(c.shunts[k].bus));
        t.emplace_back(i, i, Complex(0.0, q));
    }
    for (const auto& v : c.converters) {
        if (v.b_filter != 0.0) {
            const auto i = static_cast<Eigen::Index>(c.bus_index(v.ac_bus));
            t.emplace_back(i, i, Complex(0.0, v.b_filter));
        }
    }

    Ybus out;
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(t.begin(), t.end());
    out.matrix.makeCompressed();
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.matrix.coeff(i, i) == Complex(0.0, 0.0)) out.zero_diagonal_buses.push_back(c.buses[i].id);
    return out;
}

AcSettings default_ac_settings(const CaseData& c) {
    AcSettings s;
    for (const auto& g : c.generators) {
        s.gen_p.push_back(g.p);
        s.gen_v.push_back(g.v_set);
    }
    for (auto k : c.tap_branches()) s.taps.push_back(c.branches[k].ratio);
    for (const auto& sh : c.shunts) s.shunt_q.push_back(sh.q);
    return s;
}

Eigen::VectorXcd bus_injections(const SparseComplex& ybus, const Eigen::VectorXd& v, const Eigen::VectorXd& theta) {
    const auto n = v.size();
    Eigen::VectorXcd volt(n);
    for (Eigen::Index i = 0; i < n; ++i) volt[i] = std::polar(v[i], theta[i]);
    const Eigen::VectorXcd current = ybus * volt;
    return volt.cwiseProduct(current.conjugate());
}

PowerFlowEquations::PowerFlowEquations(const SparseComplex& ybus, std::vector<int> pv, std::vector<int> pq,
                                       Eigen::VectorXd p_spec, Eigen::VectorXd q_spec)
    : ybus_(ybus), pv_(std::move(pv)), pq_(std::move(pq)), p_spec_(std::move(p_spec)), q_spec_(std::move(q_spec)) {
    const auto n = static_cast<std::size_t>(ybus_.rows());
    angle_pos_.assign(n, -1);
    mag_pos_.assign(n, -1);
    std::vector<int> free = pv_;
    free.insert(free.end(), pq_.begin(), pq_.end());
    std::sort(free.begin(), free.end());
    int k = 0;
    for (int b : free) angle_pos_[static_cast<std::size_t>(b)] = k++;
    std::vector<int> pq_sorted = pq_;
    std::sort(pq_sorted.begin(), pq_sorted.end());
    for (int b : pq_sorted) mag_pos_[static_cast<std::size_t>(b)] = k++;
}

Eigen::VectorXd PowerFlowEquations::pack(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < angle_pos_.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (angle_pos_[i] >= 0) x[angle_pos_[i]] = theta[ii];
        if (mag_pos_[i] >= 0) x[mag_pos_[i]] = v[ii];
    }
    return x;
}

void PowerFlowEquations::unpack(const Eigen::VectorXd& x, Eigen::VectorXd& v, Eigen::VectorXd& theta) const {
    for (std::size_t i = 0; i < angle_pos_.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (angle_pos_[i] >= 0) theta[ii] = x[angle_pos_[i]];
        if (mag_pos_[i] >= 0) v[ii] = x[mag_pos_[i]];
    }
}

Eigen::VectorXd PowerFlowEquations::mismatch(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const {
    const Eigen::VectorXcd s = bus_injections(ybus_, v, theta);
    Eigen::VectorXd f(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < angle_pos_.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (angle_pos_[i] >= 0) f[angle_pos_[i]] = s[ii].real() - p_spec_[ii];
        if (mag_pos_[i] >= 0) f[mag_pos_[i]] = s[ii].imag() - q_spec_[ii];
    }
    return f;
}

Eigen::SparseMatrix<double> PowerFlowEquations::jacobian(const Eigen::VectorXd& v, const Eigen::VectorXd& theta) const {
    const auto n = v.size();
    Eigen::VectorXcd volt(n), vnorm(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        vnorm[i] = std::polar(1.0, theta[i]);
        volt[i] = v[i] * vnorm[i];
    }
    const Eigen::VectorXcd current = ybus_ * volt;

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(ybus_.nonZeros()) * 4);
    auto emit = [&](Eigen::Index i, Eigen::Index k, Complex ds_dva, Complex ds_dvm) {
        const int pr = angle_pos_[static_cast<std::size_t>(i)];
        const int qr = mag_pos_[static_cast<std::size_t>(i)];
        const int ac = angle_pos_[static_cast<std::size_t>(k)];
        const int mc = mag_pos_[static_cast<std::size_t>(k)];
        if (pr >= 0) {
            if (ac >= 0) t.emplace_back(pr, ac, ds_dva.real());
            if (mc >= 0) t.emplace_back(pr, mc, ds_dvm.real());
        }
        if (qr >= 0) {
            if (ac >= 0) t.emplace_back(qr, ac, ds_dva.imag());
            if (mc >= 0) t.emplace_back(qr, mc, ds_dvm.imag());
        }
    };
    // dS/dVm = diag(V) conj(Y diag(Vnorm)) + conj(diag(I)) diag(Vnorm)
    // dS/dVa = j diag(V) conj(diag(I) - Y diag(V))
    for (Eigen::Index col = 0; col < ybus_.outerSize(); ++col) {
        for (SparseComplex::InnerIterator it(ybus_, col); it; ++it) {
            const Eigen::Index i = it.row(), k = it.col();
            const Complex y = it.value();
            Complex dvm = volt[i] * std::conj(y * vnorm[k]);
            Complex dva = -kJ * volt[i] * std::conj(y * volt[k]);
            if (i == k) {
                dvm += std::conj(current[i]) * vnorm[i];
                dva += kJ * volt[i] * std::conj(current[i]);
            }
            emit(i, k, dva, dvm);
        }
    }
    Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    jac.setFromTriplets(t.begin(), t.end());
    jac.makeCompressed();
    return jac;
}

AcState solve_ac_pf(const CaseData& c, const AcInjectionOverlay& overlay, const AcSettings& settings,
                    const AcOptions& opt) {
    const std::size_t n = c.buses.size();
    const auto nn = static_cast<Eigen::Index>(n);
    const Ybus y = build_ybus(c, settings.taps, settings.shunt_q);

    std::vector<std::vector<std::size_t>> gens_at(n);
    for (std::size_t g = 0; g < c.generators.size(); ++g) gens_at[c.bus_index(c.generators[g].bus)].push_back(g);

    auto ov_p = [&](std::size_t i) { return i < overlay.p.size() ? overlay.p[i] : 0.0; };
    auto ov_q = [&](std::size_t i) { return i < overlay.q.size() ? overlay.q[i] : 0.0; };
    auto pin = [&](std::size_t i) -> std::optional<double> {
        return i < overlay.v_pin.size() ? overlay.v_pin[i] : std::nullopt;
    };

    enum class Kind { Slack, PV, PQ };
    std::vector<Kind> kind(n, Kind::PQ);
    std::vector<double> vset(n, 1.0);
    std::vector<bool> pinned(n, false);
    Eigen::VectorXd p_spec(nn), q_spec(nn);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = c.buses[i];
        const auto ii = static_cast<Eigen::Index>(i);
        double pg = 0.0;
        for (auto g : gens_at[i]) pg += settings.gen_p[g];
        p_spec[ii] = pg - b.p_load + ov_p(i);
        q_spec[ii] = -b.q_load + ov_q(i);
        if (b.kind == BusKind::Slack) {
            kind[i] = Kind::Slack;
            if (!gens_at[i].empty()) vset[i] = settings.gen_v[gens_at[i].front()];
        } else if (b.kind == BusKind::PV && !gens_at[i].empty()) {
            kind[i] = Kind::PV;
            vset[i] = settings.gen_v[gens_at[i].front()];
        }
        if (auto vp = pin(i); vp && kind[i] != Kind::Slack) {
            kind[i] = Kind::PV;
            vset[i] = *vp;
            pinned[i] = true;
        }
    }

    Eigen::VectorXd v = Eigen::VectorXd::Ones(nn), theta = Eigen::VectorXd::Zero(nn);
    if (opt.warm_start && opt.warm_start->v.size() == n) {
        for (std::size_t i = 0; i < n; ++i) {
            v[static_cast<Eigen::Index>(i)] = opt.warm_start->v[i];
            theta[static_cast<Eigen::Index>(i)] = opt.warm_start->theta[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (kind[i] != Kind::PQ) v[static_cast<Eigen::Index>(i)] = vset[i];
    const std::size_t slack = c.slack_bus();
    theta[static_cast<Eigen::Index>(slack)] = 0.0;

    AcState st;
    std::vector<bool> switched(n, false);
    int iterations = 0;
    bool converged = false;
    double worst = 0.0;

    while (true) {
        std::vector<int> pv, pq;
        for (std::size_t i = 0; i < n; ++i) {
            if (kind[i] == Kind::PV) pv.push_back(static_cast<int>(i));
            if (kind[i] == Kind::PQ) pq.push_back(static_cast<int>(i));
        }
        PowerFlowEquations eq(y.matrix, pv, pq, p_spec, q_spec);
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        bool analyzed = false;
        converged = false;
        while (true) {
            const Eigen::VectorXd f = eq.mismatch(v, theta);
            worst = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
            if (!std::isfinite(worst)) break;
            if (worst <= opt.tol) {
                converged = true;
                break;
            }
            if (iterations >= opt.max_iter) break;
            const auto jac = eq.jacobian(v, theta);
            if (!analyzed) {
                lu.analyzePattern(jac);
                analyzed = true;
            }
            lu.factorize(jac);
            if (lu.info() != Eigen::Success) break;
            const Eigen::VectorXd dx = lu.solve(-f);
            Eigen::VectorXd x = eq.pack(v, theta) + dx;
            eq.unpack(x, v, theta);
            ++iterations;
        }
        if (!converged || !opt.enforce_q_limits) break;

        // PV -> PQ switching at reactive limits, ascending bus id, each bus at most once.
        const Eigen::VectorXcd s = bus_injections(y.matrix, v, theta);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.buses[a].id < c.buses[b].id; });
        bool any = false;
        for (auto i : order) {
            if (kind[i] != Kind::PV || pinned[i] || switched[i]) continue;
            double qmin = 0.0, qmax = 0.0;
            for (auto g : gens_at[i]) {
                qmin += c.generators[g].q_min;
                qmax += c.generators[g].q_max;
            }
            const double qg = s[static_cast<Eigen::Index>(i)].imag() + c.buses[i].q_load - ov_q(i);
            double limit;
            if (qg > qmax + opt.tol) limit = qmax;
            else if (qg < qmin - opt.tol) limit = qmin;
            else continue;
            kind[i] = Kind::PQ;
            switched[i] = true;
            q_spec[static_cast<Eigen::Index>(i)] = -c.buses[i].q_load + ov_q(i) + limit;
            st.q_limited_buses.push_back(c.buses[i].id);
            any = true;
        }
        if (!any) break;
    }

    st.converged = converged;
    st.iterations = iterations;
    st.max_mismatch = worst;
    st.v.assign(v.data(), v.data() + nn);
    st.theta.assign(theta.data(), theta.data() + nn);

    const Eigen::VectorXcd s = bus_injections(y.matrix, v, theta);
    st.p_inj.resize(n);
    st.q_inj.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        st.p_inj[i] = s[static_cast<Eigen::Index>(i)].real();
        st.q_inj[i] = s[static_cast<Eigen::Index>(i)].imag();
    }

    st.p_gen = settings.gen_p;
    st.q_gen.assign(c.generators.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& gl = gens_at[i];
        if (gl.empty()) continue;
        const double total_q = st.q_inj[i] + c.buses[i].q_load - ov_q(i);
        if (kind[i] == Kind::PQ && !switched[i]) {
            // generator on a bus without voltage control: fixed at its dispatch, no reactive output
            for (auto g : gl) st.q_gen[g] = 0.0;
        } else {
            for (auto g : gl) st.q_gen[g] = total_q / static_cast<double>(gl.size());
        }
        if (kind[i] == Kind::Slack) {
            double others = 0.0;
            for (std::size_t k = 1; k < gl.size(); ++k) others += settings.gen_p[gl[k]];
            st.p_gen[gl.front()] = st.p_inj[i] + c.buses[i].p_load - ov_p(i) - others;
        }
    }

    // Branch end flows.
    std::vector<double> ratio(c.branches.size());
    for (std::size_t k = 0; k < c.branches.size(); ++k) ratio[k] = c.branches[k].ratio;
    {
        const auto tapped = c.tap_branches();
        for (std::size_t k = 0; k < tapped.size() && k < settings.taps.size(); ++k) ratio[tapped[k]] = settings.taps[k];
    }
    const std::size_t nb = c.branches.size();
    st.p_from.resize(nb);
    st.q_from.resize(nb);
    st.p_to.resize(nb);
    st.q_to.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        const auto& br = c.branches[k];
        const auto f = c.bus_index(br.from), t = c.bus_index(br.to);
        const Complex vf = std::polar(st.v[f], st.theta[f]);
        const Complex vt = std::polar(st.v[t], st.theta[t]);
        const Complex ys = 1.0 / Complex(br.r, br.x);
        const Complex ytt = ys + kJ * (br.b_charging / 2.0);
        const double tap = ratio[k];
        const Complex i_f = ytt / (tap * tap) * vf - ys / tap * vt;
        const Complex i_t = ytt * vt - ys / tap * vf;
        const Complex sf = vf * std::conj(i_f);
        const Complex stt = vt * std::conj(i_t);
        st.p_from[k] = sf.real();
        st.q_from[k] = sf.imag();
        st.p_to[k] = stt.real();
        st.q_to[k] = stt.imag();
    }
    return st;
}

}  // namespace acdc
