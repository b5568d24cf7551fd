#include "nc/serialize.hpp"

namespace nc {

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& M) {
    Json rows = Json::array();
    for (long i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < M.cols(); ++j) row.push_back(to_json(M(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const NcPoint& x) {
    Json vars = Json::array();
    for (const auto& v : x.vars) vars.push_back(to_json(v));
    return Json{{"level", x.level()}, {"vars", std::move(vars)}};
}

Json to_json(const DomainSpec& spec) {
    Json params = Json::object();
    const char* kind = "";
    switch (spec.kind) {
        case DomainKind::MatrixPolydisk:
            kind = "matrix_polydisk";
            params["d"] = spec.d;
            break;
        case DomainKind::RpqBall:
            kind = "rpq_ball";
            params["p"] = spec.shape.p;
            params["q"] = spec.shape.q;
            break;
        case DomainKind::SpectralDisk:
            kind = "spectral_disk";
            params["radii"] = spec.radii;
            break;
        case DomainKind::CommutatorDomain:
            kind = "commutator_domain";
            break;
    }
    Json levels;
    if (spec.levels.all())
        levels = "all";
    else
        levels = Json{{"generators", spec.levels.generators}};
    return Json{{"kind", kind}, {"params", std::move(params)}, {"levels", std::move(levels)}};
}

Json to_json(const NcMapExpr& expr) {
    return std::visit(
        [&](const auto& node) -> Json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MobiusTuple>) {
                Json params = Json::array();
                for (const auto& m : node.params)
                    params.push_back(Json{{"theta", m.theta}, {"a", to_json(m.a)}});
                Json j{{"variant", "mobius_tuple"}, {"params", std::move(params)}};
                if (!node.perm.empty()) j["perm"] = node.perm;
                return j;
            } else if constexpr (std::is_same_v<T, LinearIsometry>) {
                return Json{{"variant", "linear_isometry"},
                            {"U", to_json(node.U)},
                            {"V", to_json(node.V)},
                            {"p", node.shape.p},
                            {"q", node.shape.q}};
            } else if constexpr (std::is_same_v<T, TransposeAmplification>) {
                return Json{{"variant", "transpose_amplification"}, {"p", node.p}};
            } else if constexpr (std::is_same_v<T, HaMap>) {
                return Json{{"variant", "ha"},
                            {"A", to_json(node.A)},
                            {"p", node.shape.p},
                            {"q", node.shape.q}};
            } else if constexpr (std::is_same_v<T, CounterexampleMap>) {
                Json h = Json::array();
                for (Complex c : node.h_coeffs) h.push_back(to_json(c));
                return Json{{"variant", "counterexample"}, {"h", std::move(h)}};
            } else if constexpr (std::is_same_v<T, ComposeMap>) {
                Json factors = Json::array();
                for (const auto& f : node.factors) factors.push_back(to_json(f));
                return Json{{"variant", "compose"}, {"factors", std::move(factors)}};
            } else {
                return Json{{"variant", "identity"}, {"d", node.d}};
            }
        },
        expr.node);
}

Json to_json(const CheckReport& rep) {
    return Json{{"check", rep.check_name}, {"seed", rep.seed},
                {"trials", rep.trials},    {"max_residual", rep.max_residual},
                {"tolerance", rep.tolerance}, {"passed", rep.passed},
                {"witnesses", rep.witnesses}, {"runtime_ms", rep.runtime_ms}};
}

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError("complex value must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
    const size_t rows = j.size();
    const size_t cols = j[0].size();
    Matrix M(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw ParseError("matrix rows have unequal length");
        for (size_t c = 0; c < cols; ++c) M(i, c) = complex_from_json(j[i][c]);
    }
    return M;
}

NcPoint point_from_json(const Json& j) {
    if (!j.contains("vars")) throw ParseError("point needs a \"vars\" field");
    std::vector<Matrix> vars;
    for (const auto& v : j.at("vars")) vars.push_back(matrix_from_json(v));
    NcPoint x(std::move(vars));
    if (j.contains("level") && j.at("level").get<int>() != x.level())
        throw ParseError("point \"level\" disagrees with matrix sizes");
    return x;
}

DomainSpec domain_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Json params = j.value("params", Json::object());
    DomainSpec spec;
    if (kind == "matrix_polydisk") {
        spec = DomainSpec::polydisk(params.at("d").get<int>());
    } else if (kind == "rpq_ball") {
        spec = DomainSpec::rpq(params.at("p").get<int>(), params.at("q").get<int>());
    } else if (kind == "spectral_disk") {
        spec = DomainSpec::spectral_disk(
            params.value("radii", std::vector<double>{1.0}));
    } else if (kind == "commutator_domain") {
        spec = DomainSpec::commutator();
    } else {
        throw ParseError("unknown domain kind: " + kind);
    }
    if (j.contains("levels") && !j.at("levels").is_string())
        spec.levels.generators = j.at("levels").at("generators").get<std::vector<int>>();
    return spec;
}

NcMapExpr map_from_json(const Json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "identity") {
        return NcMapExpr::identity(j.at("d").get<int>());
    } else if (variant == "mobius_tuple") {
        std::vector<MobiusParam> params;
        for (const auto& m : j.at("params"))
            params.push_back({m.at("theta").get<double>(), complex_from_json(m.at("a"))});
        std::vector<int> perm;
        if (j.contains("perm")) perm = j.at("perm").get<std::vector<int>>();
        return NcMapExpr::mobius_tuple(std::move(params), std::move(perm));
    } else if (variant == "linear_isometry") {
        return NcMapExpr::linear_isometry(matrix_from_json(j.at("U")),
                                          matrix_from_json(j.at("V")),
                                          {j.at("p").get<int>(), j.at("q").get<int>()});
    } else if (variant == "transpose_amplification") {
        return NcMapExpr::transpose_amplification(j.at("p").get<int>());
    } else if (variant == "ha") {
        return NcMapExpr::ha(matrix_from_json(j.at("A")),
                             {j.at("p").get<int>(), j.at("q").get<int>()});
    } else if (variant == "counterexample") {
        std::vector<Complex> h;
        for (const auto& c : j.at("h")) h.push_back(complex_from_json(c));
        return NcMapExpr::counterexample(std::move(h));
    } else if (variant == "compose") {
        std::vector<NcMapExpr> factors;
        for (const auto& f : j.at("factors")) factors.push_back(map_from_json(f));
        return NcMapExpr::compose(std::move(factors));
    }
    throw ParseError("unknown map variant: " + variant);
}

}  // namespace nc
