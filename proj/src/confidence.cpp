#include "partialrank/confidence.hpp"

#include <cmath>
#include <string>

#include "partialrank/errors.hpp"

namespace partialrank {

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::i_wins: return "i-wins";
        case Verdict::j_wins: return "j-wins";
        case Verdict::undecided: return "undecided";
    }
    throw InvariantError("unknown verdict");
}

double hoeffding_halfwidth(std::uint64_t z, double delta, HoeffdingConstant constant) {
    if (z == 0) throw ValidationError("hoeffding_halfwidth: no direct comparisons (z = 0)");
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("hoeffding_halfwidth: delta must lie in (0, 1]");
    const double numerator = constant == HoeffdingConstant::two_sided ? std::log(2.0 / delta) : -std::log(delta);
    return std::sqrt(numerator / (2.0 * static_cast<double>(z)));
}

double PairConfidence::margin() const {
    switch (verdict) {
        case Verdict::i_wins: return (*m_hat - *c) - 0.5;
        case Verdict::j_wins: return (*m_hat + *c) - 0.5;
        case Verdict::undecided: return 0.0;
    }
    throw InvariantError("unknown verdict");
}

ConfidenceReport::ConfidenceReport(std::size_t n, double delta, std::vector<PairConfidence> pairs)
    : n_(n), delta_(delta), pairs_(std::move(pairs)) {
    if (pairs_.size() != n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2) throw InvariantError("confidence report: wrong pair count");
}

PairConfidence ConfidenceReport::pair(SystemId a, SystemId b) const {
    if (a == b || a >= n_ || b >= n_) throw ValidationError("confidence report: invalid pair");
    const SystemId lo = std::min(a, b);
    const SystemId hi = std::max(a, b);
    // Row-major offset of (lo, hi) among pairs with i < j.
    const std::size_t idx = lo * (2 * n_ - lo - 1) / 2 + (hi - lo - 1);
    PairConfidence p = pairs_.at(idx);
    if (a == lo) return p;
    std::swap(p.i, p.j);
    if (p.m_hat) p.m_hat = 1.0 - *p.m_hat;
    if (p.verdict == Verdict::i_wins) {
        p.verdict = Verdict::j_wins;
    } else if (p.verdict == Verdict::j_wins) {
        p.verdict = Verdict::i_wins;
    }
    return p;
}

std::size_t ConfidenceReport::decided_count() const {
    std::size_t out = 0;
    for (const auto& p : pairs_)
        if (p.verdict != Verdict::undecided) ++out;
    return out;
}

ConfidenceReport confidence_report(const AccumulatedMatrix& acc, double delta, HoeffdingConstant constant) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("confidence: delta must lie in (0, 1]");
    const std::size_t n = acc.size();
    std::vector<PairConfidence> pairs;
    pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            PairConfidence p;
            p.i = static_cast<SystemId>(i);
            p.j = static_cast<SystemId>(j);
            p.z = acc.direct_count(i, j);
            if (p.z > 0) {
                p.m_hat = static_cast<double>(acc.direct_wins(i, j)) / static_cast<double>(p.z);
                p.c = hoeffding_halfwidth(p.z, delta, constant);
                if (*p.m_hat - *p.c > 0.5) {
                    p.verdict = Verdict::i_wins;
                } else if (*p.m_hat + *p.c < 0.5) {
                    p.verdict = Verdict::j_wins;
                }
            }
            pairs.push_back(p);
        }
    }
    return ConfidenceReport(n, delta, std::move(pairs));
}

std::vector<std::vector<double>> significance_heatmap(const ConfidenceReport& report, const Ranking& order) {
    const std::size_t n = report.size();
    if (order.size() != n) throw ValidationError("heatmap: ranking and report sizes differ");
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const SystemId x = order.at(a);
            const SystemId y = order.at(b);
            const double m = report.pair(std::min(x, y), std::max(x, y)).margin();
            out[a][b] = x < y ? m : -m;
        }
    }
    return out;
}

}  // namespace partialrank
