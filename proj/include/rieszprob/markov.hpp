#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rieszprob/band.hpp"
#include "rieszprob/condexp.hpp"
#include "rieszprob/element.hpp"
#include "rieszprob/errors.hpp"
#include "rieszprob/partition.hpp"

namespace rieszprob {

/// A finite process over a strictly increasing integer time index, anchored
/// to a base conditional expectation T (strictly positive by construction)
/// and a T-invariant weak order unit.
class Process {
public:
    Process(CondExp base, Element unit, std::vector<int> times, std::vector<Element> elements)
        : base_(std::move(base)), unit_(std::move(unit)), times_(std::move(times)),
          elements_(std::move(elements)) {
        require_same_space(base_.space(), unit_.space(), "process");
        if (times_.size() != elements_.size())
            throw StructureError("process: time/element count mismatch");
        if (times_.empty()) throw StructureError("process: needs at least one time");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (times_[i] <= times_[i - 1])
                throw DomainError("process: times must be strictly increasing");
        for (const auto& x : elements_)
            require_same_space(base_.space(), x.space(), "process element");
        if (!unit_.is_strictly_positive() || !unit_.is_nonnegative())
            throw DomainError("process: e is not a weak order unit");
        if (base_.apply(unit_) != unit_) throw DomainError("process: unit not T-invariant");
    }

    const CondExp& base() const { return base_; }
    const Element& unit() const { return unit_; }
    const SpacePtr& space() const { return base_.space(); }
    const std::vector<int>& times() const { return times_; }
    const std::vector<Element>& elements() const { return elements_; }

    std::size_t time_index(int t) const {
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        if (it == times_.end() || *it != t)
            throw DomainError("process: unknown time " + std::to_string(t));
        return static_cast<std::size_t>(it - times_.begin());
    }
    const Element& at_time(int t) const { return elements_[time_index(t)]; }

private:
    CondExp base_;
    Element unit_;
    std::vector<int> times_;
    std::vector<Element> elements_;
};

/// Partition carrying <R(T), X_t : t in ts>; ts may be empty (then R(T)).
inline Partition history_partition(const Process& proc, const std::vector<int>& ts) {
    std::vector<Element> xs;
    xs.reserve(ts.size());
    for (int t : ts) xs.push_back(proc.at_time(t));
    return generated_partition(proc.base().partition(), std::span<const Element>(xs));
}

/// The conditional expectation T_{(t_1,...,t_n)}; T itself for empty ts.
inline CondExp history_condexp(const Process& proc, const std::vector<int>& ts) {
    return condexp_onto(proc.base(), history_partition(proc, ts));
}

inline CondExp single_time_condexp(const Process& proc, int t) {
    return history_condexp(proc, {t});
}

enum class MarkovIdentity {
    kDefinition,      // T_{(t_1..t_n)} P e == T_{t_n} P e
    kOperatorForm,    // T_{(t_1..t_n)} T_t == T_{t_n} T_t
    kFutureProducts,  // T_{(t_1..t_n,t)} Q_1..Q_m e == T_t Q_1..Q_m e
    kJointFuture,     // same operators on a basis of the joint future subspace
    kRaoII,           // TT_u T_v == T_u T_v (TT_u = full history through u)
    kRaoIII,          // T_t Q T_t P e == T_t Q P e == T_t P Q e == T_t P T_t Q e
};

inline const char* to_string(MarkovIdentity id) {
    switch (id) {
        case MarkovIdentity::kDefinition: return "definition";
        case MarkovIdentity::kOperatorForm: return "operator form";
        case MarkovIdentity::kFutureProducts: return "future products";
        case MarkovIdentity::kJointFuture: return "joint future subspace";
        case MarkovIdentity::kRaoII: return "history-vs-single-time composition";
        case MarkovIdentity::kRaoIII: return "past-future four-term chain";
    }
    return "?";
}

/// Everything needed to re-evaluate a failed Markov identity exactly.
struct MarkovWitness {
    MarkovIdentity identity;
    std::vector<int> past;
    int t = 0;
    std::vector<int> future;
    std::optional<BandProjection> p, q;
    Element lhs, rhs;
};

struct MarkovReport {
    bool verdict = false;
    std::optional<MarkovWitness> witness;
    explicit operator bool() const { return verdict; }
    static MarkovReport yes() { return {true, std::nullopt}; }
};

namespace detail {
inline std::vector<int> mask_times(const Process& proc, std::uint64_t mask) {
    std::vector<int> ts;
    for (std::size_t i = 0; i < proc.times().size(); ++i)
        if (mask & (std::uint64_t{1} << i)) ts.push_back(proc.times()[i]);
    return ts;
}

inline void require_two_times(const Process& proc) {
    if (proc.times().size() < 2)
        throw DomainError("markov checker: process needs at least two times");
}
}  // namespace detail

/// The defining property: for every t_1 < ... < t_n < t in the index set and
/// every band projection P acting inside <R(T), X_t>,
///   T_{(t_1,...,t_n)} P e == T_{t_n} P e   exactly.
/// Enumeration (and the first-failure witness) is deterministic: target time
/// ascending, history subsets by mask, projections in subset-mask order.
inline MarkovReport is_markov(const Process& proc, std::size_t cap = kEnumBlockCap) {
    detail::require_two_times(proc);
    const auto& times = proc.times();
    std::vector<CondExp> single;
    single.reserve(times.size());
    for (int t : times) single.push_back(single_time_condexp(proc, t));
    for (std::size_t it = 1; it < times.size(); ++it) {
        const int t = times[it];
        auto projections = enumerate_band_projections(single[it].partition(), cap);
        std::vector<Element> images;
        images.reserve(projections.size());
        for (const auto& p : projections) images.push_back(p.apply(proc.unit()));
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << it); ++mask) {
            std::vector<int> history = detail::mask_times(proc, mask);
            CondExp t_history = history_condexp(proc, history);
            const CondExp& t_last = single[proc.time_index(history.back())];
            for (std::size_t k = 0; k < projections.size(); ++k) {
                Element lhs = t_history.apply(images[k]);
                Element rhs = t_last.apply(images[k]);
                if (lhs != rhs)
                    return {false,
                            MarkovWitness{MarkovIdentity::kDefinition, history, t, {},
                                          projections[k], std::nullopt, std::move(lhs),
                                          std::move(rhs)}};
            }
        }
    }
    return MarkovReport::yes();
}

/// Operator form of the definition: T_{(t_1..t_n)} T_t == T_{t_n} T_t as
/// exact matrix identities. Must agree with is_markov on every process (the
/// Freudenthal argument); the suite asserts that. A failing tuple is reported
/// through a concrete projection from the range of T_t on which the two
/// compositions differ (one exists whenever the matrices differ).
inline MarkovReport markov_operator_form(const Process& proc, std::size_t cap = kEnumBlockCap) {
    detail::require_two_times(proc);
    const auto& times = proc.times();
    std::vector<CondExp> single;
    single.reserve(times.size());
    for (int s : times) single.push_back(single_time_condexp(proc, s));
    for (std::size_t it = 1; it < times.size(); ++it) {
        const int t = times[it];
        const CondExp& t_t = single[it];
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << it); ++mask) {
            std::vector<int> history = detail::mask_times(proc, mask);
            CondExp t_history = history_condexp(proc, history);
            const CondExp& t_last = single[proc.time_index(history.back())];
            if (t_history.matrix() * t_t.matrix() == t_last.matrix() * t_t.matrix()) continue;
            for (const auto& p : enumerate_band_projections(t_t.partition(), cap)) {
                Element pe = p.apply(proc.unit());
                Element lhs = t_history.apply(pe);
                Element rhs = t_last.apply(pe);
                if (lhs != rhs)
                    return {false,
                            MarkovWitness{MarkovIdentity::kOperatorForm, history, t, {}, p,
                                          std::nullopt, std::move(lhs), std::move(rhs)}};
            }
            throw Error("markov_operator_form: matrices differ but no projection witnesses it");
        }
    }
    return MarkovReport::yes();
}

inline constexpr std::size_t kFutureTimesCap = 3;

/// Extension of the defining identity to products over the future: for every
/// split t_1<...<t_n < t < s_1<...<s_m and every tuple of band projections
/// Q_i acting inside <R(T), X_{s_i}>,
///   T_{(t_1..t_n,t)} Q_1...Q_m e == T_t Q_1...Q_m e,
/// plus the same operators on a basis of the joint future subspace
/// <R(T), X_{s_1},...,X_{s_m}>. Runs (and reports) regardless of whether the
/// process is Markov.
inline MarkovReport future_products(const Process& proc, std::size_t cap = kEnumBlockCap,
                                    std::size_t future_cap = kFutureTimesCap) {
    detail::require_two_times(proc);
    const auto& times = proc.times();
    const std::size_t n = times.size();
    std::vector<Partition> single_time_partitions;
    single_time_partitions.reserve(n);
    for (int s : times)
        single_time_partitions.push_back(
            generated_partition(proc.base().partition(), {proc.at_time(s)}));
    for (std::size_t it = 1; it + 1 < n; ++it) {
        const int t = times[it];
        const std::size_t future_slots = n - it - 1;
        CondExp t_t(proc.space(), single_time_partitions[it]);
        for (std::uint64_t hist_mask = 1; hist_mask < (std::uint64_t{1} << it); ++hist_mask) {
            std::vector<int> history = detail::mask_times(proc, hist_mask);
            std::vector<int> with_t = history;
            with_t.push_back(t);
            CondExp t_hist_t = history_condexp(proc, with_t);
            for (std::uint64_t fmask = 1; fmask < (std::uint64_t{1} << future_slots); ++fmask) {
                std::vector<int> future;
                for (std::size_t j = 0; j < future_slots; ++j)
                    if (fmask & (std::uint64_t{1} << j)) future.push_back(times[it + 1 + j]);
                if (future.size() > future_cap) continue;

                // Tuple scan: compose one projection per future time.
                std::vector<std::vector<BandProjection>> per_time;
                for (int s : future)
                    per_time.push_back(enumerate_band_projections(
                        single_time_partitions[proc.time_index(s)], cap));
                std::vector<std::size_t> idx(future.size(), 0);
                while (true) {
                    BandProjection product = BandProjection::identity(proc.space());
                    for (std::size_t k = 0; k < idx.size(); ++k)
                        product = compose(product, per_time[k][idx[k]]);
                    Element qe = product.apply(proc.unit());
                    Element lhs = t_hist_t.apply(qe);
                    Element rhs = t_t.apply(qe);
                    if (lhs != rhs)
                        return {false,
                                MarkovWitness{MarkovIdentity::kFutureProducts, history, t, future,
                                              std::nullopt, product, std::move(lhs),
                                              std::move(rhs)}};
                    std::size_t k = 0;
                    while (k < idx.size() && ++idx[k] == per_time[k].size()) idx[k++] = 0;
                    if (k == idx.size()) break;
                }

                // Joint-future form: a spanning set of <R(T), X_{s_1..s_m}>.
                std::vector<Element> xs;
                for (int s : future) xs.push_back(proc.at_time(s));
                Partition joint =
                    generated_partition(proc.base().partition(), std::span<const Element>(xs));
                for (std::size_t b = 0; b < joint.block_count(); ++b) {
                    BandProjection pb = joint.block_projection(b);
                    Element f = pb.apply(proc.unit());
                    Element lhs = t_hist_t.apply(f);
                    Element rhs = t_t.apply(f);
                    if (lhs != rhs)
                        return {false,
                                MarkovWitness{MarkovIdentity::kJointFuture, history, t, future, pb,
                                              std::nullopt, std::move(lhs), std::move(rhs)}};
                }
            }
        }
    }
    return MarkovReport::yes();
}

/// Chapman-Kolmogorov: T_u X == T_u T_t X for all X in a basis of R(T_n),
/// u < t < n, together with the operator form T_u T_n == T_u T_t T_n.
inline bool chapman_kolmogorov(const Process& proc, int u, int t, int n) {
    if (!(u < t && t < n)) throw DomainError("chapman_kolmogorov: need u < t < n");
    CondExp t_u = single_time_condexp(proc, u);
    CondExp t_t = single_time_condexp(proc, t);
    CondExp t_n = single_time_condexp(proc, n);
    for (std::size_t b = 0; b < t_n.partition().block_count(); ++b) {
        Element x = t_n.partition().block_projection(b).apply(proc.unit());
        if (t_u.apply(x) != t_u.apply(t_t.apply(x))) return false;
    }
    return t_u.matrix() * t_n.matrix() == t_u.matrix() * t_t.matrix() * t_n.matrix();
}

/// Rao (ii): TT_u T_v == T_u T_v where TT_u conditions on the whole history
/// through u and T_v, T_u are single-time.
inline bool rao_ii(const Process& proc, int u, int v) {
    if (!(u < v)) throw DomainError("rao_ii: need u < v");
    std::vector<int> through_u;
    for (int s : proc.times())
        if (s <= u) through_u.push_back(s);
    CondExp full_u = history_condexp(proc, through_u);
    CondExp t_u = single_time_condexp(proc, u);
    CondExp t_v = single_time_condexp(proc, v);
    return full_u.matrix() * t_v.matrix() == t_u.matrix() * t_v.matrix();
}

/// All-pairs conjunction of rao_ii with a concrete witness on failure.
inline MarkovReport rao_ii_all(const Process& proc) {
    detail::require_two_times(proc);
    const auto& times = proc.times();
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            if (rao_ii(proc, times[i], times[j])) continue;
            std::vector<int> through_u;
            for (int s : times)
                if (s <= times[i]) through_u.push_back(s);
            CondExp full_u = history_condexp(proc, through_u);
            CondExp t_u = single_time_condexp(proc, times[i]);
            CondExp t_v = single_time_condexp(proc, times[j]);
            for (std::size_t b = 0; b < t_v.partition().block_count(); ++b) {
                BandProjection pb = t_v.partition().block_projection(b);
                Element f = pb.apply(proc.unit());
                Element lhs = full_u.apply(f);
                Element rhs = t_u.apply(f);
                if (lhs != rhs)
                    return {false,
                            MarkovWitness{MarkovIdentity::kRaoII, through_u, times[i],
                                          {times[j]}, pb, std::nullopt, std::move(lhs),
                                          std::move(rhs)}};
            }
            throw Error("rao_ii_all: matrices differ but no projection witnesses it");
        }
    return MarkovReport::yes();
}

namespace detail {
/// Scans the four-term chain for one split, given the single-time operator.
/// QP and PQ are the same band (indicator intersection), so the two middle
/// members coincide by construction and the chain needs two comparisons.
inline std::optional<MarkovWitness> rao_iii_scan(const Process& proc, const CondExp& t_t, int t,
                                                 const std::vector<int>& past,
                                                 const std::vector<int>& future,
                                                 std::size_t cap) {
    const Element& e = proc.unit();
    auto ps = enumerate_band_projections(history_partition(proc, past), cap);
    auto qs = enumerate_band_projections(history_partition(proc, future), cap);
    std::vector<Element> tpe, tqe;
    tpe.reserve(ps.size());
    tqe.reserve(qs.size());
    for (const auto& p : ps) tpe.push_back(t_t.apply(p.apply(e)));
    for (const auto& q : qs) tqe.push_back(t_t.apply(q.apply(e)));
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j) {
            Element a = t_t.apply(qs[j].apply(tpe[i]));              // T_t Q T_t P e
            Element mid = t_t.apply(compose(qs[j], ps[i]).apply(e));  // T_t Q P e = T_t P Q e
            Element d = t_t.apply(ps[i].apply(tqe[j]));              // T_t P T_t Q e
            if (a == mid && mid == d) continue;
            const bool head_differs = (a != mid);
            Element lhs = head_differs ? std::move(a) : std::move(mid);
            Element rhs = head_differs ? std::move(mid) : std::move(d);
            return MarkovWitness{MarkovIdentity::kRaoIII, past, t, future, ps[i], qs[j],
                                 std::move(lhs), std::move(rhs)};
        }
    return std::nullopt;
}
}  // namespace detail

/// Rao (iii) at one split: for all band projections P into the joint past
/// subspace and Q into the joint future subspace,
///   T_t Q T_t P e == T_t Q P e == T_t P Q e == T_t P T_t Q e.
inline bool rao_iii(const Process& proc, int t, const std::vector<int>& past_times,
                    const std::vector<int>& future_times, std::size_t cap = kEnumBlockCap) {
    for (int p : past_times)
        if (p >= t) throw DomainError("rao_iii: past time not before t");
    for (int f : future_times)
        if (f <= t) throw DomainError("rao_iii: future time not after t");
    CondExp t_t = single_time_condexp(proc, t);
    return !detail::rao_iii_scan(proc, t_t, t, past_times, future_times, cap).has_value();
}

/// All-splits conjunction of rao_iii: every pivot t with nonempty past and
/// future selections on both sides. Witness carries the first adjacent
/// inequality of the four-term chain.
inline MarkovReport rao_iii_all(const Process& proc, std::size_t cap = kEnumBlockCap) {
    detail::require_two_times(proc);
    const auto& times = proc.times();
    const std::size_t n = times.size();
    for (std::size_t it = 1; it + 1 < n; ++it) {
        const int t = times[it];
        CondExp t_t = single_time_condexp(proc, t);
        const std::size_t future_slots = n - it - 1;
        for (std::uint64_t past_mask = 1; past_mask < (std::uint64_t{1} << it); ++past_mask) {
            std::vector<int> past = detail::mask_times(proc, past_mask);
            for (std::uint64_t fmask = 1; fmask < (std::uint64_t{1} << future_slots); ++fmask) {
                std::vector<int> future;
                for (std::size_t j = 0; j < future_slots; ++j)
                    if (fmask & (std::uint64_t{1} << j)) future.push_back(times[it + 1 + j]);
                auto witness = detail::rao_iii_scan(proc, t_t, t, past, future, cap);
                if (witness) return {false, std::move(witness)};
            }
        }
    }
    return MarkovReport::yes();
}

/// The closing-note identities: with TT_t the history through t and SS_t the
/// history from t onward, both composition orders are compared against the
/// single-time T_t. (The source display repeats one order; both are computed
/// and reported.)
struct PastFutureNote {
    bool past_then_future;  // TT_t SS_t == T_t
    bool future_then_past;  // SS_t TT_t == T_t
};

inline PastFutureNote past_future_note(const Process& proc, int t) {
    std::vector<int> upto, from;
    for (int s : proc.times()) {
        if (s <= t) upto.push_back(s);
        if (s >= t) from.push_back(s);
    }
    CondExp tt = history_condexp(proc, upto);
    CondExp ss = history_condexp(proc, from);
    CondExp t_t = single_time_condexp(proc, t);
    return {tt.matrix() * ss.matrix() == t_t.matrix(),
            ss.matrix() * tt.matrix() == t_t.matrix()};
}

/// Re-evaluates a Markov witness from scratch; the returned pair must equal
/// the stored sides and be an exact inequality.
inline std::pair<Element, Element> reevaluate(const Process& proc, const MarkovWitness& w) {
    switch (w.identity) {
        case MarkovIdentity::kDefinition:
        case MarkovIdentity::kOperatorForm: {
            Element pe = w.p->apply(proc.unit());
            return {history_condexp(proc, w.past).apply(pe),
                    single_time_condexp(proc, w.past.back()).apply(pe)};
        }
        case MarkovIdentity::kFutureProducts:
        case MarkovIdentity::kJointFuture: {
            std::vector<int> with_t = w.past;
            with_t.push_back(w.t);
            const BandProjection& proj = w.identity == MarkovIdentity::kFutureProducts
                                             ? *w.q
                                             : *w.p;
            Element qe = proj.apply(proc.unit());
            return {history_condexp(proc, with_t).apply(qe),
                    single_time_condexp(proc, w.t).apply(qe)};
        }
        case MarkovIdentity::kRaoII: {
            Element f = w.p->apply(proc.unit());
            return {history_condexp(proc, w.past).apply(f),
                    single_time_condexp(proc, w.t).apply(f)};
        }
        case MarkovIdentity::kRaoIII: {
            CondExp t_t = single_time_condexp(proc, w.t);
            const Element& e = proc.unit();
            Element a = t_t.apply(w.q->apply(t_t.apply(w.p->apply(e))));
            Element b = t_t.apply(compose(*w.q, *w.p).apply(e));
            Element c = t_t.apply(compose(*w.p, *w.q).apply(e));
            Element d = t_t.apply(w.p->apply(t_t.apply(w.q->apply(e))));
            if (a != b) return {a, b};
            if (b != c) return {b, c};
            return {c, d};
        }
    }
    throw Error("reevaluate: unknown identity");
}

/// The four checkers side by side; the suite requires them to agree on every
/// process, positive or negative.
struct MarkovEquivalence {
    MarkovReport definition;
    MarkovReport operator_form;
    MarkovReport rao2;
    MarkovReport rao3;

    bool all_agree() const {
        return definition.verdict == operator_form.verdict &&
               definition.verdict == rao2.verdict && definition.verdict == rao3.verdict;
    }
    bool verdict() const { return definition.verdict; }
};

inline MarkovEquivalence markov_equivalence(const Process& proc, std::size_t cap = kEnumBlockCap) {
    return {is_markov(proc, cap), markov_operator_form(proc, cap), rao_ii_all(proc),
            rao_iii_all(proc, cap)};
}

}  // namespace rieszprob
