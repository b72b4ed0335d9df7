#include "core/json_io.hpp"

namespace nclp {

Json matrix_to_json(const Mat& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array(), ri = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Mat matrix_from_json(const Json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw domain_error("matrix json: negative dimensions");
    const auto& re = j.at("re");
    const bool has_im = j.contains("im");
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) {
            const double r = re.at(i).at(k).get<double>();
            const double v = has_im ? j.at("im").at(i).at(k).get<double>() : 0.0;
            m(i, k) = Complex(r, v);
        }
    check_finite(m, "matrix json");
    return m;
}

Json density_to_json(const Density& d) {
    return Json{{"matrix", matrix_to_json(d.matrix())}, {"mass", d.mass()}};
}

Density density_from_json(const Json& j) {
    return Density(matrix_from_json(j.at("matrix")), j.at("mass").get<double>());
}

Json exponent_to_json(double p) {
    if (std::isinf(p)) return Json("inf");
    return Json(p);
}

double exponent_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "infinity") return INF;
        throw domain_error("exponent json: unknown string value");
    }
    return j.get<double>();
}

namespace {

const char* placement_name(DensityPlacement p) {
    switch (p) {
        case DensityPlacement::Symmetric: return "symmetric";
        case DensityPlacement::Left: return "left";
        case DensityPlacement::Right: return "right";
        case DensityPlacement::BothQuarter: return "both-quarter";
    }
    return "symmetric";
}

DensityPlacement placement_from(const std::string& s) {
    if (s == "symmetric") return DensityPlacement::Symmetric;
    if (s == "left") return DensityPlacement::Left;
    if (s == "right") return DensityPlacement::Right;
    if (s == "both-quarter") return DensityPlacement::BothQuarter;
    throw domain_error("norm spec json: unknown placement tag");
}

} // namespace

Json norm_spec_to_json(const NormSpec& s) {
    Json j{{"p", exponent_to_json(s.p)},
           {"q", exponent_to_json(s.q)},
           {"u", exponent_to_json(s.u)},
           {"v", exponent_to_json(s.v)},
           {"amplification", s.amplification},
           {"placement", placement_name(s.placement)}};
    if (s.density) j["density"] = density_to_json(*s.density);
    j["subalgebra"] = Json{{"kind", s.subalgebra.kind == SubalgebraSpec::Scalars
                                        ? "scalars"
                                        : "left_factor"},
                           {"m", s.subalgebra.m}};
    return j;
}

NormSpec norm_spec_from_json(const Json& j) {
    NormSpec s;
    if (j.contains("p")) s.p = exponent_from_json(j.at("p"));
    if (j.contains("q")) s.q = exponent_from_json(j.at("q"));
    if (j.contains("u")) s.u = exponent_from_json(j.at("u"));
    if (j.contains("v")) s.v = exponent_from_json(j.at("v"));
    if (j.contains("amplification")) s.amplification = j.at("amplification").get<Eigen::Index>();
    if (j.contains("placement")) s.placement = placement_from(j.at("placement").get<std::string>());
    if (j.contains("density")) s.density = density_from_json(j.at("density"));
    if (j.contains("subalgebra")) {
        const auto& sub = j.at("subalgebra");
        const auto kind = sub.at("kind").get<std::string>();
        if (kind == "scalars") s.subalgebra = SubalgebraSpec::scalars();
        else if (kind == "left_factor")
            s.subalgebra = SubalgebraSpec::left_factor(sub.at("m").get<Eigen::Index>());
        else throw domain_error("norm spec json: unknown subalgebra kind");
    }
    return s;
}

Json report_to_json(const OptimizerReport& r) {
    Json j{{"value", r.value},
           {"iterations", r.iterations},
           {"restarts", r.restarts},
           {"converged", r.converged},
           {"seed", r.seed}};
    if (r.duality_gap) j["duality_gap"] = *r.duality_gap;
    return j;
}

Json diagonal_weight_to_json(const DiagonalWeight& w) {
    Json g = Json::array();
    for (Eigen::Index i = 0; i < w.gammas.size(); ++i) g.push_back(w.gammas[i]);
    return Json{{"gammas", g}, {"k_n", w.k_n()}};
}

DiagonalWeight diagonal_weight_from_json(const Json& j) {
    const auto& g = j.at("gammas");
    Vec v(g.size());
    for (size_t i = 0; i < g.size(); ++i) v[(Eigen::Index)i] = g.at(i).get<double>();
    return DiagonalWeight(v);
}

Json couple_endpoint_to_json(const CoupleEndpoint& e) {
    return Json{{"p", exponent_to_json(e.p)}, {"dl", e.dl}, {"dr", e.dr}};
}

CoupleEndpoint couple_endpoint_from_json(const Json& j) {
    if (j.contains("tag")) {
        const auto tag = j.at("tag").get<std::string>();
        const double p = j.contains("p") ? exponent_from_json(j.at("p")) : 2.0;
        if (tag == "lp-state") return CoupleEndpoint::lp_state(p);
        if (tag == "row-lp") return CoupleEndpoint::row_lp(p);
        if (tag == "col-lp") return CoupleEndpoint::col_lp(p);
        if (tag == "oh") return CoupleEndpoint::oh();
        throw domain_error("couple endpoint json: unknown tag " + tag);
    }
    return CoupleEndpoint::weighted_schatten(exponent_from_json(j.at("p")),
                                             j.at("dl").get<double>(), j.at("dr").get<double>());
}

Json couple_spec_to_json(const CoupleSpec& c) {
    return Json{{"e0", couple_endpoint_to_json(c.e0)},
                {"e1", couple_endpoint_to_json(c.e1)},
                {"theta", c.theta}};
}

CoupleSpec couple_spec_from_json(const Json& j) {
    return CoupleSpec{couple_endpoint_from_json(j.at("e0")), couple_endpoint_from_json(j.at("e1")),
                      j.at("theta").get<double>()};
}

} // namespace nclp
