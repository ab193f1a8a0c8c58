#ifndef EDBN_STATS_HPP
#define EDBN_STATS_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <numbers>
#include <ranges>
#include <type_traits>
#include <utility>
#include <vector>

#include "edbn/error.hpp"

namespace edbn {

/// Empirical counts of a column (or of a pair of columns).
template <class T>
struct FrequencyTable {
    std::map<T, std::size_t> counts;
    std::size_t total = 0;
};

template <std::ranges::input_range R>
FrequencyTable<std::ranges::range_value_t<R>> frequency_table(const R& column) {
    FrequencyTable<std::ranges::range_value_t<R>> t;
    for (const auto& v : column) {
        ++t.counts[v];
        ++t.total;
    }
    return t;
}

namespace detail {

template <class R>
concept CodeColumn = std::ranges::input_range<R> && std::ranges::sized_range<R> &&
                     std::unsigned_integral<std::ranges::range_value_t<R>>;

/// Sum of -(c/n) ln(c/n) over counts; zero counts contribute nothing.
template <class Counts>
double entropy_of_counts(const Counts& counts, double n) {
    double h = 0.0;
    for (double c : counts)
        if (c > 0) h -= (c / n) * std::log(c / n);
    return h;
}

/// Marginal counts of x, marginal counts of y and the nonzero joint counts,
/// each in a deterministic order.
struct JointCounts {
    std::vector<double> x, y;
    std::vector<std::pair<std::size_t, double>> xy;  ///< (y index, joint count), grouped arbitrarily
    double n = 0;
};

template <CodeColumn RX, CodeColumn RY>
JointCounts joint_counts(const RX& xs, const RY& ys) {
    JointCounts jc;
    const std::size_t n = std::ranges::size(xs);
    jc.n = static_cast<double>(n);
    std::uint64_t max_x = 0, max_y = 0;
    for (auto v : xs) max_x = std::max<std::uint64_t>(max_x, v);
    for (auto v : ys) max_y = std::max<std::uint64_t>(max_y, v);
    const std::uint64_t rx = max_x + 1, ry = max_y + 1;
    jc.x.assign(rx, 0.0);
    jc.y.assign(ry, 0.0);
    for (auto v : xs) jc.x[v] += 1;
    for (auto v : ys) jc.y[v] += 1;

    auto ix = std::ranges::begin(xs);
    auto iy = std::ranges::begin(ys);
    if (rx * ry <= 4 * n + 4096) {
        std::vector<double> dense(rx * ry, 0.0);
        for (; ix != std::ranges::end(xs); ++ix, ++iy) dense[std::uint64_t(*ix) * ry + *iy] += 1;
        for (std::uint64_t k = 0; k < dense.size(); ++k)
            if (dense[k] > 0) jc.xy.emplace_back(k % ry, dense[k]);
    } else {
        std::vector<std::uint64_t> keys;
        keys.reserve(n);
        for (; ix != std::ranges::end(xs); ++ix, ++iy) keys.push_back(std::uint64_t(*ix) * ry + *iy);
        std::sort(keys.begin(), keys.end());
        for (std::size_t i = 0; i < keys.size();) {
            std::size_t j = i;
            while (j < keys.size() && keys[j] == keys[i]) ++j;
            jc.xy.emplace_back(keys[i] % ry, static_cast<double>(j - i));
            i = j;
        }
    }
    return jc;
}

template <std::ranges::input_range RX, std::ranges::input_range RY>
JointCounts joint_counts(const RX& xs, const RY& ys) {
    std::map<std::ranges::range_value_t<RX>, std::uint32_t> xi;
    std::map<std::ranges::range_value_t<RY>, std::uint32_t> yi;
    std::vector<std::uint32_t> xc, yc;
    for (const auto& v : xs) xc.push_back(xi.try_emplace(v, static_cast<std::uint32_t>(xi.size())).first->second);
    for (const auto& v : ys) yc.push_back(yi.try_emplace(v, static_cast<std::uint32_t>(yi.size())).first->second);
    return joint_counts(xc, yc);
}

template <class RX, class RY>
void check_pair(const RX& xs, const RY& ys) {
    const auto nx = std::ranges::distance(xs), ny = std::ranges::distance(ys);
    if (nx != ny) throw ArgumentError("columns differ in length");
    if (nx == 0) throw ArgumentError("empty column");
}

/// H(X) and H(X|Y) in nats.
struct EntropyPair {
    double hx = 0, hx_given_y = 0;
};

inline EntropyPair entropies(const JointCounts& jc) {
    EntropyPair e;
    e.hx = entropy_of_counts(jc.x, jc.n);
    for (const auto& [y, c] : jc.xy) e.hx_given_y -= (c / jc.n) * std::log(c / jc.y[y]);
    return e;
}

}  // namespace detail

/// Shannon entropy, natural log unless `base` is given. 0 log 0 = 0.
template <std::ranges::input_range R>
double entropy(const R& column, double base = std::numbers::e) {
    if (std::ranges::empty(column)) throw ArgumentError("entropy of an empty column");
    double h = 0.0;
    if constexpr (detail::CodeColumn<R>) {
        std::uint64_t max_code = 0;
        for (auto v : column) max_code = std::max<std::uint64_t>(max_code, v);
        std::vector<double> counts(max_code + 1, 0.0);
        for (auto v : column) counts[v] += 1;
        h = detail::entropy_of_counts(counts, static_cast<double>(std::ranges::size(column)));
    } else {
        auto t = frequency_table(column);
        std::vector<double> counts;
        for (const auto& [v, c] : t.counts) counts.push_back(static_cast<double>(c));
        h = detail::entropy_of_counts(counts, static_cast<double>(t.total));
    }
    return h / std::log(base);
}

/// H(X|Y).
template <std::ranges::input_range RX, std::ranges::input_range RY>
double conditional_entropy(const RX& xs, const RY& ys, double base = std::numbers::e) {
    detail::check_pair(xs, ys);
    return detail::entropies(detail::joint_counts(xs, ys)).hx_given_y / std::log(base);
}

/// I(X;Y), evaluated as H(X) - H(X|Y) and clamped at 0.
template <std::ranges::input_range RX, std::ranges::input_range RY>
double mutual_information(const RX& xs, const RY& ys, double base = std::numbers::e) {
    detail::check_pair(xs, ys);
    const auto e = detail::entropies(detail::joint_counts(xs, ys));
    return std::max(0.0, e.hx - e.hx_given_y) / std::log(base);
}

/// U(X|Y) = I(X;Y) / H(X): the fraction of X's entropy explained by Y.
/// 1 for constant X; exactly 1 whenever Y determines X on these rows.
template <std::ranges::input_range RX, std::ranges::input_range RY>
double uncertainty_coefficient(const RX& xs, const RY& ys, double base = std::numbers::e) {
    detail::check_pair(xs, ys);
    const auto e = detail::entropies(detail::joint_counts(xs, ys));
    if (e.hx <= 0.0) return 1.0;
    if (e.hx_given_y <= 0.0) return 1.0;
    const double ln_base = std::log(base);
    const double i = std::max(0.0, e.hx - e.hx_given_y) / ln_base;
    return std::clamp(i / (e.hx / ln_base), 0.0, 1.0);
}

}  // namespace edbn

#endif
