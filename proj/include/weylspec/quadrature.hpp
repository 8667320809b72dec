#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "weylspec/common.hpp"
#include "weylspec/parallel.hpp"

namespace weylspec {

namespace gk {

// G7K15 abscissae (positive half) and weights on [-1, 1].
inline constexpr double xk[8] = {
    0.0,
    0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993944, 0.8648644233597691, 0.9491079123427585,
    0.9914553711208126};
inline constexpr double wk[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786,
    0.0229353220105292};
// Gauss weights attach to xk[0], xk[2], xk[4], xk[6].
inline constexpr double wg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

} // namespace gk

/// Result of an adaptive quadrature run.
struct QuadResult {
    std::vector<double> value;  ///< integral per component
    double error = 0.0;         ///< summed panel error estimates
    int panels = 0;
    int evaluations = 0;
    bool converged = true;      ///< false if the panel cap was hit first
    /// (abscissa, integrand values) for every evaluation, sorted by abscissa;
    /// filled only when QuadOptions::record_nodes is set.
    std::vector<std::pair<double, std::vector<double>>> nodes;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_panels = 2000;
    bool record_nodes = false;
    ExecPolicy exec{};
};

using VecIntegrand = std::function<std::vector<double>(double)>;

namespace detail {

struct Panel {
    double a = 0.0, b = 0.0;
    double error = 0.0;
    std::vector<double> value;
    std::vector<std::pair<double, std::vector<double>>> evals;
};

inline Panel evaluate_panel(const VecIntegrand& f, double a, double b, bool record) {
    Panel p;
    p.a = a;
    p.b = b;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    std::vector<double> fc = f(c);
    const size_t dim = fc.size();
    std::vector<double> k15(dim), g7(dim);
    for (size_t d = 0; d < dim; ++d) {
        k15[d] = gk::wk[0] * fc[d];
        g7[d] = gk::wg[0] * fc[d];
    }
    if (record) p.evals.emplace_back(c, fc);
    for (int i = 1; i < 8; ++i) {
        const double xp = c + h * gk::xk[i];
        const double xm = c - h * gk::xk[i];
        std::vector<double> fp = f(xp);
        std::vector<double> fm = f(xm);
        for (size_t d = 0; d < dim; ++d) {
            const double s = fp[d] + fm[d];
            k15[d] += gk::wk[i] * s;
            if (i % 2 == 0) g7[d] += gk::wg[i / 2] * s;
        }
        if (record) {
            p.evals.emplace_back(xp, std::move(fp));
            p.evals.emplace_back(xm, std::move(fm));
        }
    }
    p.value.resize(dim);
    for (size_t d = 0; d < dim; ++d) {
        p.value[d] = h * k15[d];
        p.error = std::max(p.error, std::abs(h * (k15[d] - g7[d])));
    }
    return p;
}

} // namespace detail

/// Adaptive Gauss-Kronrod quadrature for vector-valued integrands.
///
/// Panels above their length-proportional share of the error budget are
/// bisected, worst first; each refinement round evaluates its new panels in
/// parallel and reduces in abscissa order, so the result is independent of
/// thread scheduling.
inline QuadResult adaptive_quadrature_vec(const VecIntegrand& f, double a, double b,
                                          const QuadOptions& opt = {}) {
    if (!(b > a)) throw DomainError("adaptive_quadrature: need b > a");
    using detail::Panel;

    std::vector<Panel> panels;
    panels.push_back(detail::evaluate_panel(f, a, b, opt.record_nodes));
    int evaluations = 15;
    bool converged = true;
    const double length = b - a;

    while (true) {
        double total_error = 0.0;
        double scale = 0.0;
        const size_t dim = panels.front().value.size();
        for (size_t d = 0; d < dim; ++d) {
            double comp = 0.0;
            for (const Panel& p : panels) comp += p.value[d];
            scale = std::max(scale, std::abs(comp));
        }
        for (const Panel& p : panels) total_error += p.error;
        const double budget = std::max(opt.abs_tol, opt.rel_tol * scale);
        if (total_error <= budget) break;
        if (static_cast<int>(panels.size()) >= opt.max_panels) {
            converged = false;
            break;
        }

        // Panels above a proportional share of the budget are refinement
        // candidates; split the worst ones this round.
        std::vector<size_t> candidates;
        for (size_t i = 0; i < panels.size(); ++i)
            if (panels[i].error > budget * (panels[i].b - panels[i].a) / length)
                candidates.push_back(i);
        if (candidates.empty()) break; // errors are spread thin; total is close enough
        std::sort(candidates.begin(), candidates.end(), [&](size_t l, size_t r) {
            if (panels[l].error != panels[r].error) return panels[l].error > panels[r].error;
            return panels[l].a < panels[r].a;
        });
        // The per-round split count is a fixed constant so the panel set, and
        // with it every emitted number, is identical for any worker count.
        const size_t max_round = 8;
        size_t room = static_cast<size_t>(opt.max_panels) - panels.size();
        const size_t n_split = std::min({candidates.size(), max_round, room});
        candidates.resize(n_split);

        std::vector<std::pair<double, double>> halves;
        for (size_t idx : candidates) {
            const double mid = 0.5 * (panels[idx].a + panels[idx].b);
            halves.emplace_back(panels[idx].a, mid);
            halves.emplace_back(mid, panels[idx].b);
        }
        std::vector<Panel> fresh(halves.size());
        parallel_for(halves.size(), opt.exec, [&](size_t i) {
            fresh[i] = detail::evaluate_panel(f, halves[i].first, halves[i].second,
                                              opt.record_nodes);
        });
        evaluations += static_cast<int>(halves.size()) * 15;

        std::vector<char> dead(panels.size(), 0);
        for (size_t idx : candidates) dead[idx] = 1;
        std::vector<Panel> next;
        next.reserve(panels.size() + halves.size());
        for (size_t i = 0; i < panels.size(); ++i)
            if (!dead[i]) next.push_back(std::move(panels[i]));
        for (Panel& p : fresh) next.push_back(std::move(p));
        panels = std::move(next);
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });

    QuadResult res;
    const size_t dim = panels.front().value.size();
    res.value.assign(dim, 0.0);
    for (const Panel& p : panels) {
        for (size_t d = 0; d < dim; ++d) res.value[d] += p.value[d];
        res.error += p.error;
    }
    res.panels = static_cast<int>(panels.size());
    res.evaluations = evaluations;
    res.converged = converged;
    if (opt.record_nodes) {
        for (Panel& p : panels)
            for (auto& e : p.evals) res.nodes.push_back(std::move(e));
        std::sort(res.nodes.begin(), res.nodes.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
    }
    return res;
}

struct ScalarQuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    int evaluations = 0;
    bool converged = true;
};

inline ScalarQuadResult adaptive_quadrature(const std::function<double(double)>& f,
                                            double a, double b,
                                            const QuadOptions& opt = {}) {
    QuadResult r = adaptive_quadrature_vec(
        [&f](double x) { return std::vector<double>{f(x)}; }, a, b, opt);
    return {r.value[0], r.error, r.panels, r.evaluations, r.converged};
}

} // namespace weylspec
