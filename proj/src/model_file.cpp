#include "sgff/model_file.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sgff {

struct Expr::Node {
    enum Kind { Num, Var, Index, Neg, Add, Sub, Mul, Div, Pow, Call, Prod, Sum } kind;
    cplx num{0.0, 0.0};
    std::string name;  // variable, indexed array, function or range variable
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;
using Node = Expr::Node;

NodeP mk(Node::Kind k, std::vector<NodeP> kids = {}, std::string name = {}, cplx num = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    n->name = std::move(name);
    n->num = num;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodeP parse() {
        NodeP e = expr();
        ws();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ModelFileError("expression error at column " + std::to_string(i_ + 1) + ": " + msg +
                             " in '" + s_ + "'");
    }
    void ws() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
    }
    bool eat(char c) {
        ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    NodeP expr() {
        NodeP a = term();
        for (;;) {
            if (eat('+'))
                a = mk(Node::Add, {a, term()});
            else if (eat('-'))
                a = mk(Node::Sub, {a, term()});
            else
                return a;
        }
    }
    NodeP term() {
        NodeP a = unary();
        for (;;) {
            if (eat('*'))
                a = mk(Node::Mul, {a, unary()});
            else if (eat('/'))
                a = mk(Node::Div, {a, unary()});
            else
                return a;
        }
    }
    NodeP unary() {
        if (eat('-')) return mk(Node::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }
    NodeP power() {
        NodeP a = primary();
        if (eat('^')) return mk(Node::Pow, {a, unary()});  // right associative
        return a;
    }
    std::string ident() {
        ws();
        size_t st = i_;
        while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_')) ++i_;
        return s_.substr(st, i_ - st);
    }
    NodeP primary() {
        ws();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            NodeP e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit((unsigned char)c) || c == '.') {
            size_t used = 0;
            double v = std::stod(s_.substr(i_), &used);
            i_ += used;
            return mk(Node::Num, {}, {}, v);
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::string id = ident();
            if (eat('[')) {
                if (id != "beta" && id != "l") fail("only beta[..] and l[..] are indexable");
                NodeP ix = expr();
                expect(']');
                return mk(Node::Index, {ix}, id);
            }
            if (eat('(')) {
                if (id == "prod" || id == "sum") {
                    std::string var = ident();
                    if (var.empty()) fail("range needs an index variable");
                    expect(',');
                    NodeP lo = expr();
                    expect(',');
                    NodeP hi = expr();
                    expect(',');
                    NodeP body = expr();
                    expect(')');
                    return mk(id == "prod" ? Node::Prod : Node::Sum, {lo, hi, body}, var);
                }
                static const char* fns[] = {"exp", "sinh", "cosh", "sin", "cos", "log", "sqrt"};
                bool ok = false;
                for (auto f : fns) ok = ok || id == f;
                if (!ok) fail("unknown function '" + id + "'");
                NodeP arg = expr();
                expect(')');
                return mk(Node::Call, {arg}, id);
            }
            return mk(Node::Var, {}, id);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    size_t i_ = 0;
};

struct Ctx {
    int n;
    std::span<const cplx> beta;
    std::span<const int> l;
    const Expr::Consts& consts;
    std::vector<std::pair<const std::string*, int>> idx;  // bound range variables
};

cplx ipow(cplx base, long e) {
    cplx r = 1.0;
    bool neg = e < 0;
    unsigned long m = neg ? -e : e;
    while (m) {
        if (m & 1) r *= base;
        base *= base;
        m >>= 1;
    }
    return neg ? 1.0 / r : r;
}

int as_index(cplx v) {
    double r = std::round(v.real());
    if (std::abs(v.real() - r) > 1e-9 || std::abs(v.imag()) > 1e-9)
        throw ModelFileError("non-integer index value");
    return int(r);
}

cplx ev(const Node& nd, Ctx& c) {
    switch (nd.kind) {
    case Node::Num:
        return nd.num;
    case Node::Var: {
        for (auto it = c.idx.rbegin(); it != c.idx.rend(); ++it)
            if (*it->first == nd.name) return double(it->second);
        if (nd.name == "n") return double(c.n);
        for (auto& kv : c.consts)
            if (kv.first == nd.name) return kv.second;
        if (nd.name == "pi") return kPi;
        if (nd.name == "i") return kI;
        throw ModelFileError("unknown symbol '" + nd.name + "'");
    }
    case Node::Index: {
        int a = as_index(ev(*nd.kids[0], c));
        if (a < 1 || a > c.n) throw ModelFileError("index out of range in " + nd.name);
        if (nd.name == "beta") return c.beta[a - 1];
        return double(c.l[a - 1]);
    }
    case Node::Neg:  // 0 - x keeps the sign of zero imaginary parts, so sqrt(-4) = 2i
        return cplx(0.0) - ev(*nd.kids[0], c);
    case Node::Add:
        return ev(*nd.kids[0], c) + ev(*nd.kids[1], c);
    case Node::Sub:
        return ev(*nd.kids[0], c) - ev(*nd.kids[1], c);
    case Node::Mul:
        return ev(*nd.kids[0], c) * ev(*nd.kids[1], c);
    case Node::Div:
        return ev(*nd.kids[0], c) / ev(*nd.kids[1], c);
    case Node::Pow: {
        cplx a = ev(*nd.kids[0], c), e = ev(*nd.kids[1], c);
        // integer powers exactly, so (-1)^l stays real
        if (e.imag() == 0 && e.real() == std::round(e.real()) && std::abs(e.real()) < 1e6)
            return ipow(a, long(e.real()));
        return std::pow(a, e);
    }
    case Node::Call: {
        cplx a = ev(*nd.kids[0], c);
        const std::string& f = nd.name;
        if (f == "exp") return std::exp(a);
        if (f == "sinh") return std::sinh(a);
        if (f == "cosh") return std::cosh(a);
        if (f == "sin") return std::sin(a);
        if (f == "cos") return std::cos(a);
        if (f == "log") return std::log(a);
        return std::sqrt(a);
    }
    case Node::Prod:
    case Node::Sum: {
        int lo = as_index(ev(*nd.kids[0], c)), hi = as_index(ev(*nd.kids[1], c));
        bool prod = nd.kind == Node::Prod;
        cplx acc = prod ? 1.0 : 0.0;
        c.idx.emplace_back(&nd.name, 0);
        for (int a = lo; a <= hi; ++a) {
            c.idx.back().second = a;
            cplx v = ev(*nd.kids[2], c);
            acc = prod ? acc * v : acc + v;
        }
        c.idx.pop_back();
        return acc;
    }
    }
    return 0.0;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.root_ = Parser(text).parse();
    e.src_ = text;
    return e;
}

cplx Expr::eval(int n, std::span<const cplx> beta, std::span<const int> l, const Consts& c) const {
    Ctx ctx{n, beta, l, c, {}};
    return ev(*root_, ctx);
}

OperatorModel model_from_json_text(const std::string& text, const PotentialFamily& pf) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ModelFileError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.contains("p_n")) throw ModelFileError("model file lacks 'p_n'");
    const ModelParams& p = pf.params();
    auto consts = std::make_shared<Expr::Consts>();
    consts->push_back({"b", p.b});
    consts->push_back({"b_hat", p.b_hat});
    consts->push_back({"bh", p.b_hat});
    consts->push_back({"F_ipi", pf.F_ipi()});
    consts->push_back({"sin2pib", std::sin(2 * kPi * p.b)});
    auto scalar = [&](const nlohmann::json& v) -> cplx {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return Expr::parse(v.get<std::string>()).eval(0, {}, {}, *consts);
        throw ModelFileError("expected a number or an expression string");
    };
    if (j.contains("constants")) {
        // evaluated in file order; later ones may use earlier ones
        for (auto& [k, v] : j["constants"].items()) consts->push_back({k, scalar(v)});
    }
    OperatorModel m;
    m.name = j.value("name", std::string("file-model"));
    m.spin = j.contains("spin") ? scalar(j["spin"]).real() : 0.0;
    m.F0 = j.contains("F0") ? scalar(j["F0"]) : cplx(1.0);
    m.max_n = j.value("max_n", kMaxParticles);
    if (m.max_n < 0 || m.max_n > kMaxParticles)
        throw ModelFileError("max_n must lie in [0, " + std::to_string(kMaxParticles) + "]");
    if (j.contains("growth")) {
        auto& g = j["growth"];
        m.C1 = g.value("C1", 1.0);
        m.C2 = g.value("C2", 0.0);
        m.k = g.value("k", 0);
    }
    auto ex = std::make_shared<Expr>(Expr::parse(j["p_n"].get<std::string>()));
    m.p_eval = [ex, consts](int n, std::span<const cplx> beta, std::span<const int> l) {
        return ex->eval(n, beta, l, *consts);
    };
    return m;
}

OperatorModel load_model_file(const std::string& path, const PotentialFamily& pf) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str(), pf);
}

OperatorModel resolve_model(const std::string& spec, const PotentialFamily& pf) {
    if (spec == "identity") return identity_model();
    if (spec == "toy-bounded") return toy_bounded_model();
    if (spec == "unit-k") return unit_k_model();
    return load_model_file(spec, pf);
}

}  // namespace sgff
