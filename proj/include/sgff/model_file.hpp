#pragma once
// operator families described in a JSON file with a symbolic p_n
#include <memory>
#include <string>

#include "sgff/bootstrap_ff.hpp"

namespace sgff {

struct ModelFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// compiled expression over n, beta[a], l[a], constants and prod/sum ranges
class Expr {
public:
    struct Node;
    Expr() = default;
    static Expr parse(const std::string& text);

    // names that are not built in are looked up here
    using Consts = std::vector<std::pair<std::string, cplx>>;
    cplx eval(int n, std::span<const cplx> beta, std::span<const int> l, const Consts& c) const;
    const std::string& source() const { return src_; }

private:
    std::shared_ptr<const Node> root_;
    std::string src_;
};

// keys: name, spin, F0, max_n, growth{C1,C2,k}, constants{...}, p_n
// built-in symbols: pi, i, b, b_hat (bh), F_ipi, sin2pib, n, beta[a], l[a]
OperatorModel load_model_file(const std::string& path, const PotentialFamily& pf);
OperatorModel model_from_json_text(const std::string& text, const PotentialFamily& pf);

// "identity", "toy-bounded", "unit-k" or a path to a model file
OperatorModel resolve_model(const std::string& spec, const PotentialFamily& pf);

}  // namespace sgff
