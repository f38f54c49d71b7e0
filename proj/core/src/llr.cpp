#include "linksim/llr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linksim {

namespace {

// log(sum exp(v)) with max subtraction.
double log_sum_exp(const double* v, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

} // namespace

std::vector<double> exact_llr(cplx r, const Constellation& c, double sigma2) {
    require(sigma2 > 0.0, "exact_llr: sigma2 must be > 0");
    const int n = c.size();
    // negative scaled distances, indexed like c.points
    std::vector<double> metric(n);
    for (int i = 0; i < n; ++i) metric[i] = -std::norm(r - c.points[i]) / sigma2;

    std::vector<double> out(c.k);
    std::vector<double> num, den;
    for (int i = 0; i < c.k; ++i) {
        num.clear();
        den.clear();
        for (int idx : c.subsets[i][0]) num.push_back(metric[idx]);
        for (int idx : c.subsets[i][1]) den.push_back(metric[idx]);
        out[i] = log_sum_exp(num.data(), num.size()) - log_sum_exp(den.data(), den.size());
    }
    return out;
}

std::vector<double> maxlog_llr(cplx r, const Constellation& c, double sigma2) {
    require(sigma2 > 0.0, "maxlog_llr: sigma2 must be > 0");
    const int n = c.size();
    std::vector<double> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = std::norm(r - c.points[i]);

    std::vector<double> out(c.k);
    for (int i = 0; i < c.k; ++i) {
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = std::numeric_limits<double>::infinity();
        for (int idx : c.subsets[i][0]) d0 = std::min(d0, dist[idx]);
        for (int idx : c.subsets[i][1]) d1 = std::min(d1, dist[idx]);
        out[i] = (d1 - d0) / sigma2;
    }
    return out;
}

std::vector<double> llr_sequence(const ComplexSequence& rx, const Constellation& c,
                                 double sigma2, LlrMode mode) {
    std::vector<double> out;
    out.reserve(rx.size() * c.k);
    for (const cplx r : rx) {
        const std::vector<double> v =
            mode == LlrMode::Exact ? exact_llr(r, c, sigma2) : maxlog_llr(r, c, sigma2);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

ExactLlrOpCounts exact_llr_op_counts(const Constellation& c) {
    const long long n = c.size();
    const long long k = c.k;
    ExactLlrOpCounts counts;
    counts.mult = 3 * n + k;
    counts.add = 3 * n + k * (n - 2);
    counts.explog = n + k;
    return counts;
}

} // namespace linksim
