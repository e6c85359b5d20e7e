#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "tsvf/report.hpp"

using namespace tsvf;

TEST_CASE("real formatting round-trips doubles") {
    for (double v : {0.0, 1.0, -1.0, 1.0 / 3.0, -0.992541952488352, 1e-300, 123456789.123456789,
                     std::pow(9.0, -10.0)}) {
        const std::string s = format_real(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "1e9999");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-1e9999");
    CHECK(format_real(std::nan("")) == "null");
}

TEST_CASE("json output: order, indentation, scalar forms") {
    ReportValue root = ReportValue::object();
    root.set("command", ReportValue::text("abl"));
    root.set("count", ReportValue::integer(static_cast<long long>(42)));
    root.set("rate", ReportValue::real(0.5));
    root.set("ok", ReportValue::boolean(true));
    ReportValue arr = ReportValue::array();
    arr.push(ReportValue::real(1.0));
    arr.push(ReportValue::text("x"));
    root.set("items", std::move(arr));
    ReportValue inner = ReportValue::object();
    inner.set("n", ReportValue::integer(std::uint64_t{7}));
    root.set("nested", std::move(inner));

    const std::string expected = R"({
  "command": "abl",
  "count": 42,
  "rate": 0.5,
  "ok": true,
  "items": [
    1,
    "x"
  ],
  "nested": {
    "n": 7
  }
}
)";
    CHECK(root.to_json() == expected);
}

TEST_CASE("json output: empty containers and escaping") {
    ReportValue root = ReportValue::object();
    root.set("empty_list", ReportValue::array());
    root.set("empty_obj", ReportValue::object());
    root.set("quote\\path", ReportValue::text("a \"b\"\nc\td"));
    root.set("ctrl", ReportValue::text(std::string(1, '\x01')));

    const std::string json = root.to_json();
    CHECK(json.find("\"empty_list\": []") != std::string::npos);
    CHECK(json.find("\"empty_obj\": {}") != std::string::npos);
    CHECK(json.find("\"quote\\\\path\": \"a \\\"b\\\"\\nc\\td\"") != std::string::npos);
    CHECK(json.find("\"ctrl\": \"\\u0001\"") != std::string::npos);
}

TEST_CASE("csv output flattens with dotted paths and array indices") {
    ReportValue root = ReportValue::object();
    root.set("command", ReportValue::text("simulate"));
    ReportValue sampled = ReportValue::object();
    sampled.set("n", ReportValue::integer(std::uint64_t{100}));
    ReportValue tuples = ReportValue::array();
    ReportValue t0 = ReportValue::object();
    t0.set("frequency", ReportValue::real(0.25));
    tuples.push(std::move(t0));
    sampled.set("tuples", std::move(tuples));
    root.set("sampled", std::move(sampled));
    root.set("ok", ReportValue::boolean(false));

    const std::string expected = "key,value\n"
                                 "command,simulate\n"
                                 "sampled.n,100\n"
                                 "sampled.tuples.0.frequency,0.25\n"
                                 "ok,false\n";
    CHECK(root.to_csv() == expected);
}

TEST_CASE("csv quoting only when needed") {
    ReportValue root = ReportValue::object();
    root.set("plain", ReportValue::text("hello"));
    root.set("comma", ReportValue::text("a,b"));
    root.set("quoted", ReportValue::text("say \"hi\""));
    root.set("newline", ReportValue::text("two\nlines"));

    const std::string csv = root.to_csv();
    CHECK(csv.find("plain,hello\n") != std::string::npos);
    CHECK(csv.find("comma,\"a,b\"\n") != std::string::npos);
    CHECK(csv.find("quoted,\"say \"\"hi\"\"\"\n") != std::string::npos);
    CHECK(csv.find("newline,\"two\nlines\"\n") != std::string::npos);
}

TEST_CASE("reports built from identical numbers are byte-identical") {
    const auto build = [] {
        ReportValue r = ReportValue::object();
        r.set("mean", ReportValue::real(-0.992541952488352));
        r.set("se", ReportValue::real(0.0123456789));
        return r;
    };
    CHECK(build().to_json() == build().to_json());
    CHECK(build().to_csv() == build().to_csv());
}
