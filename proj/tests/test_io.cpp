#include <gtest/gtest.h>

#include "netcode/io.hpp"
#include "support/fixtures.hpp"

using netcode::Error;
using netcode::ErrorCode;
namespace io = netcode::io;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Io, NetworkRoundTrip) {
    const auto text = io::read_file(fixtures::data_path("butterfly.json"));
    const auto n = io::parse_network(text);
    EXPECT_EQ(io::serialize_network(n), text);
    EXPECT_EQ(io::parse_network(io::serialize_network(n)), n);
}

TEST(Io, MalformedDocuments) {
    EXPECT_EQ(code_of([] { (void)fixtures::load("malformed.json"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { (void)io::parse_network(R"({"dimension": 1, "nodes": ["s"]})"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { (void)io::parse_network(R"({"dimension": "two", "nodes": [], "links": [], "source": "s", "receivers": []})"); }),
              ErrorCode::Parse);
    EXPECT_EQ(code_of([] { (void)io::load_network("/nonexistent/file.json"); }), ErrorCode::Parse);
}

TEST(Io, CodeDocumentForms) {
    const auto n = fixtures::butterfly();
    const auto local = io::load_code(fixtures::data_path("butterfly_xor_code.json"), n);
    const auto doc = io::code_to_json(local);
    EXPECT_EQ(doc["field"], "2");
    EXPECT_EQ(doc["local"].size(), n.adjacent_pairs().size());

    // local form round trip
    EXPECT_EQ(io::code_from_json(doc, n).local(), local.local());
    // global-only form recovers the same kernels
    io::Json global_only = {{"field", "2"}, {"global", doc["global"]}};
    EXPECT_EQ(io::code_from_json(global_only, n).global(), local.global());

    EXPECT_EQ(code_of([&] { (void)io::code_from_json(io::Json{{"field", "2"}}, n); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([&] { (void)io::code_from_json(io::Json{{"field", "6"}, {"local", io::Json::array()}}, n); }),
              ErrorCode::Parse);
    io::Json not_adjacent = {{"field", "2"}, {"local", {{{"d", "e1"}, {"e", "e9"}, {"k", 1}}}}};
    EXPECT_EQ(code_of([&] { (void)io::code_from_json(not_adjacent, n); }), ErrorCode::InvalidArgument);
    io::Json out_of_range = {{"field", "3"}, {"local", {{{"d", "e1"}, {"e", "e3"}, {"k", 3}}}}};
    EXPECT_EQ(code_of([&] { (void)io::code_from_json(out_of_range, n); }), ErrorCode::Parse);
}

TEST(Io, MatrixText) {
    const auto s = io::parse_matrix_text("# comment\na b c\n1 0 -1\n0 1 1\n");
    EXPECT_EQ(s.rows, 2u);
    EXPECT_EQ(s.labels, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(s(0, 2), -1);
    EXPECT_EQ(io::parse_matrix_text(io::format_matrix(s)), s);
    EXPECT_EQ(code_of([] { (void)io::parse_matrix_text("a b\n1\n"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { (void)io::parse_matrix_text("a b\n1 x\n"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { (void)io::parse_matrix_text(""); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([&] { (void)io::to_binary_matrix(s); }), ErrorCode::Parse);
}

TEST(Io, MatroidReport) {
    const auto m = netcode::uniform_matroid(1, {"a", "b"});
    const auto r = io::matroid_report(m);
    EXPECT_EQ(r.dump(), R"({"ground":["a","b"],"rank":1,"bases":[["a"],["b"]]})");
}
