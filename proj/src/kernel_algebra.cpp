#include "sgff/kernel_algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sgff {

std::string Sym::str() const {
    std::string s(1, kind);
    s += std::to_string(idx);
    if (shifted) s += "+ipi";
    return s;
}

std::string KernelTerm::to_line() const {
    std::ostringstream os;
    auto list = [&](const std::vector<int>& v) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "]";
    };
    os << p << "; k=";
    list(k_indices);
    os << "; i=";
    list(i_indices);
    os << "; S=[";
    for (size_t i = 0; i < s_factors.size(); ++i)
        os << (i ? "," : "") << "S(" << s_factors[i].x.str() << "-" << s_factors[i].y.str() << ")";
    os << "]; ff=[";
    for (size_t i = 0; i < ff_args.size(); ++i) os << (i ? "," : "") << ff_args[i].str();
    os << "]";
    return os.str();
}

long expected_term_count(int n, int m) {
    long tot = 0;
    for (int p = 0; p <= std::min(n, m); ++p) {
        long c = 1;
        for (int j = 0; j < p; ++j) c = c * (n - j) / (j + 1);
        long f = 1;
        for (int j = 0; j < p; ++j) f *= (m - j);
        tot += c * f;
    }
    return tot;
}

namespace {

void check_size(int n, int m) {
    if (n < 0 || m < 0) throw NumericsError("kernel sizes must be >= 0");
    if (n + m > kMaxKernelSize)
        throw NumericsError("kernel size n+m = " + std::to_string(n + m) + " exceeds the limit");
}

Sym A(int i, bool sh = false) { return {'a', i, sh}; }
Sym B(int i) { return {'b', i, false}; }

// increasing p-subsets of [1..n]
void subsets(int n, int p, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (int(cur.size()) == p) {
        out.push_back(cur);
        return;
    }
    for (int v = start; v <= n; ++v) {
        cur.push_back(v);
        subsets(n, p, v + 1, cur, out);
        cur.pop_back();
    }
}

// ordered p-tuples of distinct elements of [1..m]
void arrangements(int m, int p, std::vector<int>& cur, std::vector<bool>& used,
                  std::vector<std::vector<int>>& out) {
    if (int(cur.size()) == p) {
        out.push_back(cur);
        return;
    }
    for (int v = 1; v <= m; ++v) {
        if (used[v]) continue;
        used[v] = true;
        cur.push_back(v);
        arrangements(m, p, cur, used, out);
        cur.pop_back();
        used[v] = false;
    }
}

}  // namespace

std::vector<KernelTerm> expand_kernel(int n, int m) {
    check_size(n, m);
    std::vector<KernelTerm> out;
    for (int p = 0; p <= std::min(n, m); ++p) {
        std::vector<std::vector<int>> ks, is;
        std::vector<int> cur;
        subsets(n, p, 1, cur, ks);
        std::vector<bool> used(m + 1, false);
        cur.clear();
        arrangements(m, p, cur, used, is);
        for (auto& k : ks)
            for (auto& i : is) {
                KernelTerm t;
                t.p = p;
                t.k_indices = k;
                t.i_indices = i;
                std::vector<int> lc, jc;  // complements
                for (int v = 1; v <= n; ++v)
                    if (!std::count(k.begin(), k.end(), v)) lc.push_back(v);
                for (int v = 1; v <= m; ++v)
                    if (!std::count(i.begin(), i.end(), v)) jc.push_back(v);
                // alpha side: contracted alpha past every uncontracted one before it
                for (int a = 0; a < p; ++a)
                    for (int l : lc)
                        if (k[a] > l) t.s_factors.push_back({A(k[a]), A(l)});
                // beta side: each contracted beta past all betas to its left, then
                // the reordering among contracted betas
                for (int a = 0; a < p; ++a)
                    for (int bb = 1; bb < i[a]; ++bb) t.s_factors.push_back({B(bb), B(i[a])});
                for (int a = 0; a < p; ++a)
                    for (int bb = 0; bb < a; ++bb)
                        if (i[a] > i[bb]) t.s_factors.push_back({B(i[a]), B(i[bb])});
                for (auto it = lc.rbegin(); it != lc.rend(); ++it) t.ff_args.push_back(A(*it, true));
                for (int j : jc) t.ff_args.push_back(B(j));
                for (int a = 0; a < p; ++a) t.delta_pairs.push_back({k[a], i[a]});
                out.push_back(std::move(t));
            }
    }
    return out;
}

namespace {

KernelTerm rebuild_indices(KernelTerm t) {
    std::sort(t.delta_pairs.begin(), t.delta_pairs.end());
    t.p = int(t.delta_pairs.size());
    t.k_indices.clear();
    t.i_indices.clear();
    for (auto& d : t.delta_pairs) {
        t.k_indices.push_back(d.first);
        t.i_indices.push_back(d.second);
    }
    return t;
}

}  // namespace

std::vector<KernelTerm> reduce_via_axiom_v(int n, int m) {
    if (n < 1) throw NumericsError("reduction needs n >= 1");
    check_size(n, m);
    std::vector<KernelTerm> out;
    // shifted term: M_{n-1; m+1}(alpha_2.. | alpha_1 + i pi, beta_1..)
    auto mapA = [](const Sym& s) -> Sym {
        if (s.kind == 'a') return {'a', s.idx + 1, s.shifted};
        if (s.idx == 1) return {'a', 1, !s.shifted};
        return {'b', s.idx - 1, s.shifted};
    };
    for (auto& t : expand_kernel(n - 1, m + 1)) {
        bool hits_shifted = false;
        for (auto& d : t.delta_pairs) hits_shifted = hits_shifted || d.second == 1;
        if (hits_shifted) continue;  // delta(alpha_k - alpha_1 - i pi) vanishes on real lines
        KernelTerm r;
        for (auto& s : t.s_factors) r.s_factors.push_back({mapA(s.x), mapA(s.y)});
        for (auto& s : t.ff_args) r.ff_args.push_back(mapA(s));
        for (auto& d : t.delta_pairs) r.delta_pairs.push_back({d.first + 1, d.second - 1});
        out.push_back(rebuild_indices(r));
    }
    // contraction of alpha_1 with beta_a
    for (int a = 1; a <= m; ++a) {
        auto mapB = [a](const Sym& s) -> Sym {
            if (s.kind == 'a') return {'a', s.idx + 1, s.shifted};
            return {'b', s.idx < a ? s.idx : s.idx + 1, s.shifted};
        };
        for (auto& t : expand_kernel(n - 1, m - 1)) {
            KernelTerm r;
            for (int k = 1; k < a; ++k) r.s_factors.push_back({B(k), A(1)});
            for (auto& s : t.s_factors) r.s_factors.push_back({mapB(s.x), mapB(s.y)});
            for (auto& s : t.ff_args) r.ff_args.push_back(mapB(s));
            r.delta_pairs.push_back({1, a});
            for (auto& d : t.delta_pairs) r.delta_pairs.push_back({d.first + 1, mapB(B(d.second)).idx});
            out.push_back(rebuild_indices(r));
        }
    }
    return out;
}

KernelTerm normalize(const KernelTerm& t0) {
    KernelTerm t = rebuild_indices(t0);
    std::map<int, int> partner;
    for (auto& d : t.delta_pairs) partner[d.first] = d.second;
    auto sub = [&](Sym s) {
        if (s.kind == 'a') {
            auto it = partner.find(s.idx);
            if (it != partner.end()) return Sym{'b', it->second, s.shifted};
        }
        return s;
    };
    std::vector<SFactor> fs;
    for (auto f : t.s_factors) {
        Sym x = sub(f.x), y = sub(f.y);
        if (x.shifted != y.shifted) {
            // S(i pi - u) = S(u): one-sided shift flips the argument
            x.shifted = y.shifted = false;
            std::swap(x, y);
        } else if (x.shifted) {
            x.shifted = y.shifted = false;
        }
        fs.push_back({x, y});
    }
    // unitarity S(u) S(-u) = 1
    std::vector<bool> gone(fs.size(), false);
    for (size_t i = 0; i < fs.size(); ++i) {
        if (gone[i]) continue;
        for (size_t j = i + 1; j < fs.size(); ++j)
            if (!gone[j] && fs[j].x == fs[i].y && fs[j].y == fs[i].x) {
                gone[i] = gone[j] = true;
                break;
            }
    }
    t.s_factors.clear();
    for (size_t i = 0; i < fs.size(); ++i)
        if (!gone[i]) t.s_factors.push_back(fs[i]);
    std::sort(t.s_factors.begin(), t.s_factors.end());
    return t;
}

std::vector<std::string> normal_forms(const std::vector<KernelTerm>& terms) {
    std::vector<std::string> v;
    for (auto& t : terms) v.push_back(normalize(t).to_line());
    std::sort(v.begin(), v.end());
    return v;
}

bool same_term_multiset(const std::vector<KernelTerm>& a, const std::vector<KernelTerm>& b) {
    return normal_forms(a) == normal_forms(b);
}

bool has_self_scattering(const KernelTerm& t) {
    for (auto& f : t.s_factors)
        if (f.x.kind == f.y.kind && f.x.idx == f.y.idx) return true;
    return false;
}

std::vector<PatternCoefficient> evaluate_kernel_smooth_part(const std::vector<KernelTerm>& terms,
                                                            const OperatorModel& model,
                                                            std::span<const cplx> alpha,
                                                            std::span<const cplx> beta,
                                                            const PotentialFamily& pf) {
    auto val = [&](const Sym& s) -> cplx {
        const auto& src = s.kind == 'a' ? alpha : beta;
        if (s.idx < 1 || s.idx > int(src.size())) throw NumericsError("kernel symbol out of range");
        cplx v = src[s.idx - 1];
        return s.shifted ? v + kI * kPi : v;
    };
    std::map<std::vector<std::pair<int, int>>, cplx> acc;
    for (auto& t0 : terms) {
        KernelTerm t = normalize(t0);
        cplx c = 1.0;
        for (auto& f : t.s_factors) c *= s_matrix(val(f.x) - val(f.y), pf.params());
        std::vector<cplx> args;
        for (auto& s : t.ff_args) args.push_back(val(s));
        c *= form_factor(model, args, pf).value;
        acc[t.delta_pairs] += c;
    }
    std::vector<PatternCoefficient> out;
    for (auto& [k, v] : acc) out.push_back({k, v});
    return out;
}

}  // namespace sgff
