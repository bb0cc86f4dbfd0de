#include "dicut/csp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dicut {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp, std::uint64_t limit) {
    std::uint64_t result = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (result > limit / base) return limit + 1;  // saturate
        result *= base;
    }
    return result;
}

// Lexicographic index of (a_1,...,a_k): a_1 is the most significant digit.
std::size_t tuple_index(const std::vector<std::uint8_t>& args, std::uint32_t q) {
    std::size_t idx = 0;
    for (std::uint8_t a : args) idx = idx * q + a;
    return idx;
}

std::vector<std::uint8_t> index_tuple(std::size_t idx, std::uint32_t q, std::uint32_t k) {
    std::vector<std::uint8_t> args(k);
    for (std::uint32_t j = k; j-- > 0;) {
        args[j] = static_cast<std::uint8_t>(idx % q);
        idx /= q;
    }
    return args;
}

}  // namespace

Predicate::Predicate(std::uint32_t q, std::uint32_t k, std::vector<std::uint8_t> table)
    : q_(q), k_(k), table_(std::move(table)) {
    if (q_ < 2) throw std::invalid_argument("predicate: alphabet size must be >= 2");
    if (k_ < 1) throw std::invalid_argument("predicate: arity must be >= 1");
    const std::uint64_t expect = checked_pow(q_, k_, std::uint64_t{1} << 30);
    if (table_.size() != expect)
        throw std::invalid_argument("predicate: truth table must have q^k entries");
    for (std::uint8_t b : table_)
        if (b > 1) throw std::invalid_argument("predicate: table entries must be bits");
}

bool Predicate::eval(const std::vector<std::uint8_t>& args) const {
    if (args.size() != k_) throw std::invalid_argument("predicate: arity mismatch");
    for (std::uint8_t a : args)
        if (a >= q_) throw std::invalid_argument("predicate: argument outside Z_q");
    return table_[tuple_index(args, q_)] != 0;
}

Predicate Predicate::dicut() { return Predicate(2, 2, {0, 1, 0, 0}); }

Predicate Predicate::cut() { return Predicate(2, 2, {0, 1, 1, 0}); }

Predicate Predicate::const_one(std::uint32_t q, std::uint32_t k) {
    const std::uint64_t size = checked_pow(q, k, std::uint64_t{1} << 30);
    return Predicate(q, k, std::vector<std::uint8_t>(size, 1));
}

Predicate Predicate::read(std::istream& in) {
    std::uint32_t q = 0, k = 0;
    if (!(in >> q >> k)) throw std::invalid_argument("predicate file: bad header");
    const std::uint64_t expect = checked_pow(q, k, std::uint64_t{1} << 30);
    std::vector<std::uint8_t> table;
    table.reserve(expect);
    std::string tok;
    while (table.size() < expect && in >> tok) {
        for (char c : tok) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("predicate file: table entries must be bits");
            table.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
    if (table.size() != expect) throw std::invalid_argument("predicate file: truncated table");
    return Predicate(q, k, std::move(table));
}

Predicate Predicate::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open predicate file: " + path);
    return read(in);
}

void Predicate::write(std::ostream& out) const {
    out << q_ << ' ' << k_ << '\n';
    for (std::size_t i = 0; i < table_.size(); ++i)
        out << (i ? " " : "") << static_cast<int>(table_[i]);
    out << '\n';
}

CspInstance::CspInstance(std::uint32_t n, std::vector<Predicate> predicates,
                         std::vector<Constraint> constraints)
    : n_(n), predicates_(std::move(predicates)), constraints_(std::move(constraints)) {
    if (n_ == 0) throw std::invalid_argument("instance: variable count must be positive");
    if (predicates_.empty()) throw std::invalid_argument("instance: need at least one predicate");
    for (std::size_t i = 1; i < predicates_.size(); ++i)
        if (predicates_[i].q() != predicates_[0].q() || predicates_[i].k() != predicates_[0].k())
            throw std::invalid_argument("instance: predicates must share q and k");
    for (const Constraint& c : constraints_) {
        if (c.predicate_id >= predicates_.size())
            throw std::invalid_argument("instance: predicate id out of range");
        if (c.vars.size() != k()) throw std::invalid_argument("instance: tuple arity mismatch");
        for (std::size_t a = 0; a < c.vars.size(); ++a) {
            if (c.vars[a] >= n_) throw std::invalid_argument("instance: variable out of range");
            for (std::size_t b = a + 1; b < c.vars.size(); ++b)
                if (c.vars[a] == c.vars[b])
                    throw std::invalid_argument("instance: tuple indices must be distinct");
        }
    }
}

std::uint32_t CspInstance::q() const { return predicates_[0].q(); }
std::uint32_t CspInstance::k() const { return predicates_[0].k(); }

CspInstance CspInstance::read(std::istream& in, std::vector<Predicate> predicates) {
    std::uint32_t q = 0, k = 0, n = 0;
    std::uint64_t m = 0;
    if (!(in >> q >> k >> n >> m)) throw std::invalid_argument("instance file: bad header");
    if (predicates.empty() || predicates[0].q() != q || predicates[0].k() != k)
        throw std::invalid_argument("instance file: header does not match predicates");
    std::vector<Constraint> constraints;
    constraints.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        Constraint c;
        if (!(in >> c.predicate_id)) throw std::invalid_argument("instance file: truncated");
        c.vars.resize(k);
        for (auto& v : c.vars) {
            std::uint64_t raw = 0;
            if (!(in >> raw) || raw < 1 || raw > n)
                throw std::invalid_argument("instance file: bad variable index");
            v = static_cast<std::uint32_t>(raw - 1);
        }
        constraints.push_back(std::move(c));
    }
    return CspInstance(n, std::move(predicates), std::move(constraints));
}

void CspInstance::write(std::ostream& out) const {
    out << q() << ' ' << k() << ' ' << n_ << ' ' << size() << '\n';
    for (const Constraint& c : constraints_) {
        out << c.predicate_id;
        for (std::uint32_t v : c.vars) out << ' ' << v + 1;
        out << '\n';
    }
}

Rational val_at(const CspInstance& instance, const std::vector<std::uint8_t>& x) {
    if (instance.size() == 0)
        throw std::invalid_argument("val_at: value of an empty instance is undefined");
    if (x.size() != instance.n()) throw std::invalid_argument("val_at: assignment length mismatch");
    const std::uint32_t q = instance.q();
    for (std::uint8_t a : x)
        if (a >= q) throw std::invalid_argument("val_at: assignment value outside Z_q");
    std::uint64_t satisfied = 0;
    for (const Constraint& c : instance.constraints()) {
        std::size_t idx = 0;
        for (std::uint32_t v : c.vars) idx = idx * q + x[v];
        if (instance.predicates()[c.predicate_id].eval_index(idx)) satisfied++;
    }
    return Rational(static_cast<std::int64_t>(satisfied),
                    static_cast<std::int64_t>(instance.size()));
}

Rational brute_force_val(const CspInstance& instance, std::uint64_t limit) {
    if (instance.size() == 0)
        throw std::invalid_argument("brute_force_val: value of an empty instance is undefined");
    const std::uint32_t q = instance.q();
    if (checked_pow(q, instance.n(), limit) > limit)
        throw std::invalid_argument("brute_force_val: q^n exceeds enumeration limit");
    std::vector<std::uint8_t> x(instance.n(), 0);
    Rational best(0);
    for (;;) {
        const Rational v = val_at(instance, x);
        if (best < v) best = v;
        // odometer increment
        std::size_t pos = 0;
        while (pos < x.size() && ++x[pos] == q) x[pos++] = 0;
        if (pos == x.size()) break;
    }
    return best;
}

ConstraintDistribution::ConstraintDistribution(std::uint32_t q, std::uint32_t k,
                                               std::vector<Rational> probs)
    : q_(q), k_(k), probs_(std::move(probs)) {
    Rational total(0);
    for (const Rational& p : probs_) {
        if (p < Rational(0)) throw std::invalid_argument("distribution: negative probability");
        total = total + p;
    }
    if (total != Rational(1))
        throw std::invalid_argument("distribution: probabilities must sum to exactly 1");
    cumulative_.reserve(probs_.size());
    double acc = 0.0;
    for (const Rational& p : probs_) {
        acc += p.to_double();
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

ConstraintDistribution ConstraintDistribution::satisfying(const Predicate& pred,
                                                          std::vector<Rational> probs) {
    if (probs.size() != pred.table_size())
        throw std::invalid_argument("distribution: needs q^k probabilities");
    for (std::size_t idx = 0; idx < probs.size(); ++idx)
        if (!(probs[idx] == Rational(0)) && !pred.eval_index(idx))
            throw std::invalid_argument("distribution: support outside the satisfying set");
    return ConstraintDistribution(pred.q(), pred.k(), std::move(probs));
}

ConstraintDistribution ConstraintDistribution::onewise(const Predicate& pred,
                                                       std::vector<Rational> probs) {
    ConstraintDistribution d = satisfying(pred, std::move(probs));
    if (!d.is_onewise())
        throw std::invalid_argument("distribution: coordinate marginals are not uniform");
    return d;
}

ConstraintDistribution ConstraintDistribution::uniform_onewise(const Predicate& pred) {
    std::int64_t support = 0;
    for (std::size_t idx = 0; idx < pred.table_size(); ++idx)
        if (pred.eval_index(idx)) support++;
    if (support == 0) throw std::invalid_argument("distribution: predicate is unsatisfiable");
    std::vector<Rational> probs(pred.table_size(), Rational(0));
    for (std::size_t idx = 0; idx < pred.table_size(); ++idx)
        if (pred.eval_index(idx)) probs[idx] = Rational(1, support);
    return onewise(pred, std::move(probs));
}

bool ConstraintDistribution::is_onewise() const {
    for (std::uint32_t coord = 0; coord < k_; ++coord) {
        std::vector<Rational> marginal(q_, Rational(0));
        for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
            const auto args = index_tuple(idx, q_, k_);
            marginal[args[coord]] = marginal[args[coord]] + probs_[idx];
        }
        for (const Rational& p : marginal)
            if (p != Rational(1, static_cast<std::int64_t>(q_))) return false;
    }
    return true;
}

std::size_t ConstraintDistribution::sample_index(Rng& rng) const {
    const double u = uniform_unit(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                 cumulative_.size() - 1);
}

void RmdStream::write(std::ostream& out) const {
    const std::uint32_t q = predicates.at(0).q(), k = predicates.at(0).k();
    out << q << ' ' << k << ' ' << n << ' ' << symbols.size() << '\n';
    for (const RmdSymbol& s : symbols) {
        out << s.predicate_id;
        for (std::uint32_t v : s.vars) out << ' ' << v + 1;
        for (std::uint8_t z : s.shift) out << ' ' << static_cast<int>(z);
        out << '\n';
    }
}

RmdStream RmdStream::read(std::istream& in, std::vector<Predicate> predicates) {
    std::uint32_t q = 0, k = 0, n = 0;
    std::uint64_t m = 0;
    if (!(in >> q >> k >> n >> m)) throw std::invalid_argument("rmd file: bad header");
    if (predicates.empty() || predicates[0].q() != q || predicates[0].k() != k)
        throw std::invalid_argument("rmd file: header does not match predicates");
    RmdStream stream;
    stream.n = n;
    stream.predicates = std::move(predicates);
    for (std::uint64_t i = 0; i < m; ++i) {
        RmdSymbol s;
        if (!(in >> s.predicate_id) || s.predicate_id >= stream.predicates.size())
            throw std::invalid_argument("rmd file: bad predicate id");
        s.vars.resize(k);
        for (auto& v : s.vars) {
            std::uint64_t raw = 0;
            if (!(in >> raw) || raw < 1 || raw > n)
                throw std::invalid_argument("rmd file: bad variable index");
            v = static_cast<std::uint32_t>(raw - 1);
        }
        s.shift.resize(k);
        for (auto& z : s.shift) {
            std::uint32_t raw = 0;
            if (!(in >> raw) || raw >= q) throw std::invalid_argument("rmd file: bad shift value");
            z = static_cast<std::uint8_t>(raw);
        }
        stream.symbols.push_back(std::move(s));
    }
    return stream;
}

RmdStream sample_rmd_stream(const std::vector<FamilyMember>& family, std::uint32_t n,
                            std::uint64_t num_constraints, std::uint64_t t_hybrid,
                            std::uint64_t seed) {
    if (family.empty()) throw std::invalid_argument("rmd: family must be non-empty");
    const std::uint32_t q = family[0].predicate.q(), k = family[0].predicate.k();
    if (k > n) throw std::invalid_argument("rmd: arity exceeds variable count");
    if (t_hybrid > num_constraints)
        throw std::invalid_argument("rmd: hybrid index exceeds stream length");
    double weight_total = 0.0;
    for (const FamilyMember& mem : family) {
        if (mem.predicate.q() != q || mem.predicate.k() != k)
            throw std::invalid_argument("rmd: family members must share q and k");
        if (mem.masks.q() != q || mem.masks.k() != k)
            throw std::invalid_argument("rmd: mask distribution signature mismatch");
        for (std::size_t idx = 0; idx < mem.masks.probs().size(); ++idx)
            if (!(mem.masks.probs()[idx] == Rational(0)) && !mem.predicate.eval_index(idx))
                throw std::invalid_argument("rmd: mask distribution leaves the satisfying set");
        if (!(mem.weight > 0.0)) throw std::invalid_argument("rmd: weights must be positive");
        weight_total += mem.weight;
    }

    Rng rng = make_rng(seed);
    RmdStream stream;
    stream.n = n;
    for (const FamilyMember& mem : family) stream.predicates.push_back(mem.predicate);
    stream.x_star.resize(n);
    for (auto& x : stream.x_star) x = static_cast<std::uint8_t>(uniform_below(rng, q));

    const std::uint64_t qk = checked_pow(q, k, std::uint64_t{1} << 30);
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> swaps;

    stream.symbols.reserve(num_constraints);
    for (std::uint64_t i = 0; i < num_constraints; ++i) {
        RmdSymbol sym;
        // member choice
        std::size_t member = family.size() - 1;
        if (family.size() > 1) {
            const double u = uniform_unit(rng) * weight_total;
            double acc = 0.0;
            for (std::size_t f = 0; f < family.size(); ++f) {
                acc += family[f].weight;
                if (u < acc) {
                    member = f;
                    break;
                }
            }
        }
        sym.predicate_id = static_cast<std::uint32_t>(member);

        // uniform distinct k-tuple via partial Fisher-Yates, undone afterwards
        swaps.clear();
        for (std::uint32_t j = 0; j < k; ++j) {
            const auto r = static_cast<std::uint32_t>(j + uniform_below(rng, n - j));
            swaps.emplace_back(j, r);
            std::swap(pool[j], pool[r]);
        }
        sym.vars.assign(pool.begin(), pool.begin() + k);
        for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
            std::swap(pool[it->first], pool[it->second]);

        const std::size_t mask_idx = i < t_hybrid
                                         ? family[member].masks.sample_index(rng)
                                         : static_cast<std::size_t>(uniform_below(rng, qk));
        const auto mask = index_tuple(mask_idx, q, k);
        sym.shift.resize(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            const int diff = static_cast<int>(stream.x_star[sym.vars[j]]) - static_cast<int>(mask[j]);
            sym.shift[j] = static_cast<std::uint8_t>((diff % static_cast<int>(q) + q) % q);
        }
        stream.symbols.push_back(std::move(sym));
    }
    return stream;
}

CspInstance clean(const RmdStream& stream) {
    std::vector<Constraint> kept;
    for (const RmdSymbol& s : stream.symbols) {
        const bool zero = std::all_of(s.shift.begin(), s.shift.end(),
                                      [](std::uint8_t z) { return z == 0; });
        if (zero) kept.push_back({s.predicate_id, s.vars});
    }
    return CspInstance(stream.n, stream.predicates, std::move(kept));
}

namespace {

double family_expectation(const std::vector<Predicate>& family,
                          const std::vector<double>& weights, const std::vector<double>& dist) {
    const std::uint32_t q = family[0].q(), k = family[0].k();
    double total = 0.0;
    const std::size_t qk = family[0].table_size();
    for (std::size_t idx = 0; idx < qk; ++idx) {
        double sat_weight = 0.0;
        for (std::size_t f = 0; f < family.size(); ++f)
            if (family[f].eval_index(idx)) sat_weight += weights[f];
        if (sat_weight == 0.0) continue;
        double p = 1.0;
        std::size_t rest = idx;
        for (std::uint32_t j = 0; j < k; ++j) {
            // digits from least significant; the product is order-invariant
            p *= dist[rest % q];
            rest /= q;
        }
        total += sat_weight * p;
    }
    return total;
}

void enumerate_simplex(std::uint32_t dims, std::uint32_t grid,
                       const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    std::vector<std::uint32_t> counts(dims, 0);
    const std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos,
                                                                      std::uint32_t left) {
        if (pos + 1 == dims) {
            counts[pos] = left;
            fn(counts);
            return;
        }
        for (std::uint32_t c = 0; c <= left; ++c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, grid);
}

// One golden-section pass per ordered coordinate pair, moving mass from i to
// j while everything else stays fixed.
double refine_on_simplex(const std::vector<Predicate>& family, const std::vector<double>& weights,
                         std::vector<double>& dist) {
    constexpr double kInvPhi = 0.6180339887498949;
    double best = family_expectation(family, weights, dist);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        for (std::size_t j = 0; j < dist.size(); ++j) {
            if (i == j || dist[i] <= 0.0) continue;
            double lo = 0.0, hi = dist[i];
            const auto value_at = [&](double t) {
                std::vector<double> d = dist;
                d[i] -= t;
                d[j] += t;
                return family_expectation(family, weights, d);
            };
            double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
            double f1 = value_at(x1), f2 = value_at(x2);
            for (int iter = 0; iter < 60; ++iter) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + kInvPhi * (hi - lo);
                    f2 = value_at(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - kInvPhi * (hi - lo);
                    f1 = value_at(x1);
                }
            }
            const double t = (lo + hi) / 2.0;
            const double candidate = value_at(t);
            if (candidate > best) {
                best = candidate;
                dist[i] -= t;
                dist[j] += t;
            }
        }
    }
    return best;
}

}  // namespace

double rho_inner_max(const std::vector<Predicate>& family, const std::vector<double>& weights,
                     std::uint32_t grid) {
    if (family.empty()) throw std::invalid_argument("rho: family must be non-empty");
    if (weights.size() != family.size())
        throw std::invalid_argument("rho: one weight per predicate required");
    for (std::size_t i = 1; i < family.size(); ++i)
        if (family[i].q() != family[0].q() || family[i].k() != family[0].k())
            throw std::invalid_argument("rho: predicates must share q and k");
    if (grid < 10) throw std::invalid_argument("rho: grid resolution must be >= 10");

    const std::uint32_t q = family[0].q();
    double best = 0.0;
    std::vector<double> best_dist(q, 0.0);
    enumerate_simplex(q, grid, [&](const std::vector<std::uint32_t>& counts) {
        std::vector<double> dist(q);
        for (std::uint32_t a = 0; a < q; ++a)
            dist[a] = static_cast<double>(counts[a]) / static_cast<double>(grid);
        const double v = family_expectation(family, weights, dist);
        if (v > best) {
            best = v;
            best_dist = dist;
        }
    });
    const double refined = refine_on_simplex(family, weights, best_dist);
    return std::max(best, refined);
}

double rho_min(const std::vector<Predicate>& family, std::uint32_t grid) {
    if (family.empty()) throw std::invalid_argument("rho: family must be non-empty");
    if (family.size() > 3)
        throw std::invalid_argument("rho: outer minimization supports at most 3 predicates");
    if (family.size() == 1) return rho_inner_max(family, {1.0}, grid);

    double best = 1.0;
    enumerate_simplex(static_cast<std::uint32_t>(family.size()), grid,
                      [&](const std::vector<std::uint32_t>& counts) {
                          std::vector<double> weights(family.size());
                          for (std::size_t f = 0; f < family.size(); ++f)
                              weights[f] =
                                  static_cast<double>(counts[f]) / static_cast<double>(grid);
                          best = std::min(best, rho_inner_max(family, weights, grid));
                      });
    return best;
}

}  // namespace dicut
