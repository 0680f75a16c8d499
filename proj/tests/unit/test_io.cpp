#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "trigfit/io.hpp"

using namespace trigfit;
using namespace trigfit::io;

namespace
{

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

std::string parse_message(const std::string& text)
{
    std::istringstream in(text);
    try
    {
        read_csv(in);
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("double formatting round trips")
{
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0, 5e-324})
    {
        const auto s = format_double(v);
        CHECK(same_bits(parse_double(s, 1), v));
    }
    CHECK(parse_double("+2.5", 1) == 2.5);
    CHECK_THROWS_AS(parse_double("2.5x", 3), Error);
}

TEST_CASE("csv reading")
{
    std::istringstream one("\xEF\xBB\xBFvalue\n1.5\n\n  -2 \n3e-1\r\n");
    const auto t = read_csv(one);
    CHECK(t.header);
    CHECK(t.x.empty());
    REQUIRE(t.y.size() == 3);
    CHECK(t.y[2] == 0.3);

    std::istringstream two("0,1\n0.25,2\n0.5,3\n0.75,4\n");
    const auto u = read_csv(two);
    CHECK_FALSE(u.header);
    CHECK(u.x.size() == 4);
    CHECK(u.y[3] == 4.0);

    CHECK(parse_message("1\n2\nabc\n").find("line 3") != std::string::npos);
    CHECK(parse_message("1,2\n3\n").find("line 2") != std::string::npos);
    CHECK(parse_message("1,2,3\n").find("line 1") != std::string::npos);
    CHECK(parse_message("").find("no data rows") != std::string::npos);
    CHECK(parse_message("x\n").find("no data rows") != std::string::npos);
    CHECK(parse_message("1\nnan\n").find("line 2") != std::string::npos);
}

TEST_CASE("csv writing")
{
    std::ostringstream out;
    write_csv(out, {"x", "y"}, {{0.5, 1.0 / 3.0}});
    CHECK(out.str() == "x,y\n0.5,0.33333333333333331\n");
}

TEST_CASE("grids from tables")
{
    CsvTable t;
    t.y = {1, 2, 3, 4};
    Domain used;
    const auto g = to_grid(t, std::nullopt, used);
    CHECK(g.is_equispaced());
    CHECK(used.a == 0.0);
    CHECK(used.b == 1.0);

    CsvTable xy;
    xy.x = {2.0, 2.5, 3.0, 3.5};
    xy.y = {1, 2, 3, 4};
    const auto h = to_grid(xy, std::nullopt, used);
    CHECK(used.a == 2.0);
    CHECK(used.b == 4.0);
    CHECK(h.is_equispaced());
    CHECK(h.locations()[1] == 0.25);

    const auto k = to_grid(xy, Domain{0.0, 8.0}, used);
    CHECK(k.locations()[0] == 0.25);
    CHECK_FALSE(k.is_equispaced());
    CHECK_THROWS_AS(to_grid(xy, Domain{2.0, 3.0}, used), Error);

    const Domain d{-1.0, 3.0};
    CHECK(d.to_unit(4.0) == doctest::Approx(0.25));
    CHECK(d.from_unit(0.5) == 1.0);
}

TEST_CASE("model files round trip bit-exactly")
{
    ModelFile r{model_format_version,
                TrigRational({0.1, 0.6}, {0.7, 0.7}, {-1.0 / 7.0, 1.0 / 7.0}, 1.0 / 3.0),
                Domain{-0.5, 1.7},
                {}};
    r.provenance.version = "1.0.0";
    r.provenance.config = {{"tol", "1e-9"}};
    r.provenance.report = {{"m", "1"}};
    const auto text = to_string(r);
    const auto back = from_string(text);
    CHECK(back.is_rfun());
    CHECK(to_string(back) == text);
    const auto& a = std::get<TrigRational>(r.model);
    const auto& b = std::get<TrigRational>(back.model);
    for (std::size_t k = 0; k < 2; ++k)
    {
        CHECK(same_bits(a.nodes()[k], b.nodes()[k]));
        CHECK(same_bits(a.weights()[k], b.weights()[k]));
        CHECK(same_bits(a.node_values()[k], b.node_values()[k]));
    }
    CHECK(same_bits(a.mean_offset(), b.mean_offset()));
    CHECK(back.provenance.config == r.provenance.config);

    const ModelFile e{model_format_version,
                      ExpSum({cplx(0.1, -1.0 / 7.0)}, {cplx(-0.3, 2.0 / 3.0)}, std::sqrt(2.0)),
                      Domain{},
                      {}};
    const auto et = from_string(to_string(e));
    CHECK_FALSE(et.is_rfun());
    const auto& s = std::get<ExpSum>(et.model);
    CHECK(same_bits(s.weights()[0].imag(), -1.0 / 7.0));
    CHECK(same_bits(s.exponents()[0].imag(), 2.0 / 3.0));
    CHECK(same_bits(s.constant_term(), std::sqrt(2.0)));
}

TEST_CASE("malformed model files")
{
    CHECK_THROWS_AS(from_string("{"), Error);
    CHECK_THROWS_AS(from_string("[]"), Error);
    CHECK_THROWS_AS(from_string(R"({"format_version": 2, "kind": "rfun"})"), Error);
    CHECK_THROWS_AS(
        from_string(R"({"format_version": 1, "kind": "xfun", "domain": [0, 1], "payload": {}})"),
        Error);
    CHECK_THROWS_AS(
        from_string(R"({"format_version": 1, "kind": "efun", "domain": [0, 1], "payload":
            {"weights_real": [1], "weights_imag": [], "exponents_real": [-1],
             "exponents_imag": [0], "constant": 0}})"),
        Error);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}
