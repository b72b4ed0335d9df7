#include "nclp/nclp.h"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    nclp_string_free(s);
    return out;
}

} // namespace

TEST_CASE("matrix round trip and schatten through the C surface") {
    const double re[4] = {3.0, 0.0, 0.0, 4.0};
    nclp_matrix* m = nullptr;
    REQUIRE(nclp_matrix_create(2, 2, re, nullptr, &m) == NCLP_OK);
    double out = 0.0;
    CHECK(nclp_schatten_norm(m, 2.0, &out) == NCLP_OK);
    CHECK(std::abs(out - 5.0) < 1e-12);
    CHECK(nclp_schatten_norm(m, INFINITY, &out) == NCLP_OK);
    CHECK(out == 4.0);

    char* json = nullptr;
    REQUIRE(nclp_matrix_to_json(m, &json) == NCLP_OK);
    const std::string text = take(json);
    nclp_matrix* m2 = nullptr;
    REQUIRE(nclp_matrix_from_json(text.c_str(), &m2) == NCLP_OK);
    CHECK(nclp_schatten_norm(m2, 1.0, &out) == NCLP_OK);
    CHECK(std::abs(out - 7.0) < 1e-12);
    nclp_matrix_free(m);
    nclp_matrix_free(m2);

    // norm-range error is reported as a domain error
    nclp_matrix* m3 = nullptr;
    REQUIRE(nclp_matrix_create(2, 2, re, nullptr, &m3) == NCLP_OK);
    CHECK(nclp_schatten_norm(m3, 0.5, &out) == NCLP_ERR_DOMAIN);
    CHECK(std::strlen(nclp_last_error()) > 0);
    nclp_matrix_free(m3);
}

TEST_CASE("densities, state norms, factorization reports") {
    const double re[4] = {0.5, 0.0, 0.0, 0.5};
    nclp_matrix* dm = nullptr;
    REQUIRE(nclp_matrix_create(2, 2, re, nullptr, &dm) == NCLP_OK);
    nclp_density* d = nullptr;
    REQUIRE(nclp_density_create(dm, 1.0, &d) == NCLP_OK);

    const double xr[4] = {1.0, 0.0, 0.0, 1.0};
    nclp_matrix* x = nullptr;
    REQUIRE(nclp_matrix_create(2, 2, xr, nullptr, &x) == NCLP_OK);
    double out = 0.0;
    CHECK(nclp_state_lp_norm(x, d, 3.0, &out) == NCLP_OK);
    CHECK(std::abs(out - 1.0) < 1e-12);

    char* rep = nullptr;
    REQUIRE(nclp_factorization_norm(x, 4.0, 4.0, 0, &rep) == NCLP_OK);
    const auto j = nlohmann::json::parse(take(rep));
    CHECK(std::abs(j.at("value").get<double>() - std::sqrt(2.0)) < 1e-6);
    CHECK(j.at("converged").get<bool>());

    // mass mismatch is a domain error
    nclp_density* bad = nullptr;
    CHECK(nclp_density_create(dm, 2.0, &bad) == NCLP_ERR_DOMAIN);

    nclp_matrix_free(dm);
    nclp_matrix_free(x);
    nclp_density_free(d);
}

TEST_CASE("command entry points") {
    // norm command
    const char* cfg = R"({"kind":"schatten","p":2,
        "input":{"rows":2,"cols":2,"re":[[3,0],[0,4]],"im":[[0,0],[0,0]]}})";
    char* rep = nullptr;
    REQUIRE(nclp_cmd_norm(cfg, &rep) == NCLP_OK);
    auto j = nlohmann::json::parse(take(rep));
    CHECK(std::abs(j.at("value").get<double>() - 5.0) < 1e-12);

    // malformed input maps to a parse error
    CHECK(nclp_cmd_norm("{not json", &rep) == NCLP_ERR_PARSE);
    CHECK(nclp_cmd_norm(R"({"kind":"nope"})", &rep) == NCLP_ERR_PARSE);

    // moments command agrees and passes
    int passed = 0;
    REQUIRE(nclp_cmd_moments(R"({"m":3,"s":4,"dim":2,"gammas":[1.0,1.0],"seed":3})", &rep,
                             &passed) == NCLP_OK);
    j = nlohmann::json::parse(take(rep));
    CHECK(passed == 1);
    CHECK(j.at("abs_error").get<double>() <= 1e-10);

    // budget command
    REQUIRE(nclp_cmd_budget(R"({"m":2,"alpha_p":1.0,"beta_p":1.0,"gamma":1.0})", &rep) == NCLP_OK);
    j = nlohmann::json::parse(take(rep));
    CHECK(j.at("n").get<long>() == 2);

    // rosenthal command (small sample count for speed)
    REQUIRE(nclp_cmd_rosenthal(R"({"dist":"gaussian","n":4,"p":2,"q":1,"samples":10000,"seed":1})",
                               &rep) == NCLP_OK);
    j = nlohmann::json::parse(take(rep));
    CHECK(j.at("ratio").get<double>() > 0.0);

    // verify command: deterministic byte-identical reports for a fixed seed
    char* r1 = nullptr;
    char* r2 = nullptr;
    int p1 = 0, p2 = 0;
    REQUIRE(nclp_cmd_verify("harmonic-measure", 7, &r1, &p1) == NCLP_OK);
    REQUIRE(nclp_cmd_verify("harmonic-measure", 7, &r2, &p2) == NCLP_OK);
    const std::string s1 = take(r1), s2 = take(r2);
    CHECK(s1 == s2);
    CHECK(p1 == 1);
    CHECK(nclp_cmd_verify("no-such-check", 0, &r1, &p1) == NCLP_ERR_PARSE);
}

TEST_CASE("constructors reject non-finite entries") {
    const double re[4] = {1.0, std::nan(""), 0.0, 1.0};
    nclp_matrix* m = nullptr;
    CHECK(nclp_matrix_create(2, 2, re, nullptr, &m) == NCLP_ERR_DOMAIN);
    const char* inf_json = R"({"rows":1,"cols":1,"re":[[1e999]],"im":[[0]]})";
    CHECK(nclp_matrix_from_json(inf_json, &m) != NCLP_OK);
}

TEST_CASE("norm spec json accepts inf exponents") {
    // conditional with (u,v) = (4, "inf"), p = "inf" on a 2x2 input
    const char* mat = R"({"rows":2,"cols":2,"re":[[1,0.5],[0,1]],"im":[[0,0],[0,0]]})";
    nclp_matrix* x = nullptr;
    REQUIRE(nclp_matrix_from_json(mat, &x) == NCLP_OK);
    const char* spec = R"({"p":"inf","u":4,"v":"inf",
        "density":{"matrix":{"rows":2,"cols":2,"re":[[0.6,0],[0,0.4]],"im":[[0,0],[0,0]]},"mass":1.0},
        "subalgebra":{"kind":"scalars","m":1}})";
    char* rep = nullptr;
    REQUIRE(nclp_conditional_norm(x, spec, 0, &rep) == NCLP_OK);
    const auto j = nlohmann::json::parse(take(rep));
    CHECK(j.at("value").get<double>() > 0.0);
    nclp_matrix_free(x);
}

TEST_CASE("suite reports are stable across the jobs setting") {
    char* r1 = nullptr;
    char* r2 = nullptr;
    int p1 = 0, p2 = 0;
    REQUIRE(nclp_cmd_suite("interpolation", 5, 1, &r1, &p1) == NCLP_OK);
    REQUIRE(nclp_cmd_suite("interpolation", 5, 2, &r2, &p2) == NCLP_OK);
    CHECK(take(r1) == take(r2));
    CHECK(p1 == 1);
    CHECK(p1 == p2);
    CHECK(nclp_cmd_suite("bogus", 0, 1, &r1, &p1) == NCLP_ERR_PARSE);
}

TEST_CASE("couple-closed and strip commands") {
    const char* cfg = R"({"kind":"couple-closed",
        "input":{"rows":2,"cols":2,"re":[[2,0],[0,1]],"im":[[0,0],[0,0]]},
        "density":{"matrix":{"rows":2,"cols":2,"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]},"mass":1.0},
        "couple":{"e0":{"p":2,"dl":0,"dr":0},"e1":{"p":2,"dl":0,"dr":0},"theta":0.4}})";
    char* rep = nullptr;
    REQUIRE(nclp_cmd_norm(cfg, &rep) == NCLP_OK);
    auto j = nlohmann::json::parse(take(rep));
    CHECK(std::abs(j.at("value").get<double>() - std::sqrt(5.0)) < 1e-12);

    char* csv = nullptr;
    REQUIRE(nclp_cmd_strip(R"({"theta":0.5,"grid":64})", &csv) == NCLP_OK);
    const std::string text = take(csv);
    CHECK(text.find("# side,t,weight") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 129); // header + 2*64 rows
}
