// netcode: command-line front end. Reports go to stdout (deterministic), timing to stderr.
// Exit codes: 0 success, 1 semantic negative, 2 input error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "netcode/code.hpp"
#include "netcode/field_lift.hpp"
#include "netcode/io.hpp"
#include "netcode/multicast_matroid.hpp"
#include "netcode/random_network.hpp"

namespace {

using netcode::Error;
using netcode::ErrorCode;
using netcode::io::Json;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

struct Options {
    std::string network, matrix, code, field = "2", to, receiver, out;
    bool multicast = false;
    bool json = false;
    std::uint64_t seed = 0;
    std::size_t dimension = 2;
    unsigned budget_bits = 24;
};

class Report {
public:
    explicit Report(std::string command) { doc_["command"] = std::move(command); doc_["inputs"] = Json::object(); }

    std::string read_input(const std::string& path) {
        auto text = netcode::io::read_file(path);
        doc_["inputs"][path] = sha256_hex(text);
        return text;
    }
    Json& outputs() { return doc_["outputs"]; }
    void line(const std::string& s) { text_ << s << '\n'; }
    void emit(bool json, int exit_code) {
        doc_["exit"] = exit_code;
        if (json)
            std::cout << doc_.dump(2) << '\n';
        else
            std::cout << text_.str();
    }

private:
    Json doc_;
    std::ostringstream text_;
};

int exit_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotGraphic:
        case ErrorCode::ColumnWeight:
        case ErrorCode::MaxflowDeficit:
        case ErrorCode::FieldTooSmall:
        case ErrorCode::RecoveryInfeasible:
        case ErrorCode::BudgetExceeded:
        case ErrorCode::CapExceeded:
            return 1;
        default:
            return 2;
    }
}

void write_artifact(const Options& o, const std::string& text) {
    if (o.out.empty()) return;
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
    f << text;
}

std::string join(const std::vector<std::string>& v, const char* sep = " ") {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
    return s;
}

template <class T>
std::string indent_matrix(const netcode::LabeledMatrix<T>& m) {
    std::string s = netcode::io::format_matrix(m), out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out += "  " + l + "\n";
    return out;
}

netcode::SignedMatrix as_signed(const netcode::GlobalKernelMatrix& g) {
    netcode::SignedMatrix s(g.matrix.rows(), g.labels);
    for (std::size_t r = 0; r < s.rows; ++r)
        for (std::size_t c = 0; c < s.cols(); ++c) s(r, c) = static_cast<int>(g.matrix(r, c));
    return s;
}

netcode::MulticastNetwork load_net(Report& rep, const Options& o) {
    if (o.network.empty()) throw Error(ErrorCode::InvalidArgument, "--network is required");
    return netcode::io::parse_network(rep.read_input(o.network));
}

int cmd_check(Report& rep, const Options& o) {
    const auto n = load_net(rep, o);
    Json flows = Json::object(), paths = Json::object(), deficits = Json::array();
    for (auto t : n.receivers()) {
        const auto& id = n.nodes()[t];
        const auto f = netcode::maxflow(n, t);
        flows[id] = f;
        rep.line("maxflow " + id + " = " + std::to_string(f));
        if (f < n.dimension()) {
            deficits.push_back(id);
            rep.line("  deficit: needs " + std::to_string(n.dimension()));
            continue;
        }
        Json list = Json::array();
        for (const auto& p : netcode::edge_disjoint_paths(n, t).paths) {
            std::vector<std::string> ids;
            for (auto e : p) ids.push_back(n.links()[e].id);
            rep.line("  path " + join(ids));
            list.push_back(ids);
        }
        paths[id] = list;
    }
    rep.outputs() = {{"dimension", n.dimension()}, {"maxflow", flows}, {"paths", paths}, {"deficits", deficits}};
    return deficits.empty() ? 0 : 1;
}

int cmd_solve(Report& rep, const Options& o) {
    const auto n = load_net(rep, o);
    const auto field = netcode::Field::parse(o.field);
    if (field.order() > n.receivers().size()) {
        const auto code = netcode::jaggi_sanders_construct(n, field);
        rep.line("method jaggi-sanders over GF(" + field.to_string() + ")");
        rep.outputs() = {{"method", "jaggi-sanders"}, {"code", netcode::io::code_to_json(code)}};
        write_artifact(o, netcode::io::dump(netcode::io::code_to_json(code)));
        return 0;
    }
    netcode::SearchStatistics stats;
    const auto code = netcode::brute_force_solve(n, field, o.budget_bits, &stats);
    const Json st = {{"assignments_tried", stats.assignments_tried}, {"search_space", stats.search_space}};
    rep.line("method brute-force over GF(" + field.to_string() + "), tried " + std::to_string(stats.assignments_tried) +
             " of " + std::to_string(stats.search_space));
    if (!code) {
        rep.line("no GF(" + field.to_string() + ") solution");
        rep.outputs() = {{"method", "brute-force"}, {"solution", nullptr}, {"statistics", st}};
        return 1;
    }
    rep.outputs() = {{"method", "brute-force"}, {"statistics", st}, {"code", netcode::io::code_to_json(*code)}};
    rep.line(netcode::io::code_to_json(*code).dump());
    write_artifact(o, netcode::io::dump(netcode::io::code_to_json(*code)));
    return 0;
}

int cmd_verify(Report& rep, const Options& o) {
    const auto n = load_net(rep, o);
    if (o.code.empty()) throw Error(ErrorCode::InvalidArgument, "--code is required");
    const auto code = netcode::io::code_from_json(netcode::io::parse_json(rep.read_input(o.code)), n);
    const auto verdict = netcode::verify_multicast(code);
    rep.outputs() = {{"multicast", verdict.ok}, {"failing", verdict.failing}};
    rep.line(std::string("linear multicast: ") + (verdict.ok ? "yes" : "no"));
    if (!verdict.ok) rep.line("failing nodes: " + join(verdict.failing));
    return verdict.ok ? 0 : 1;
}

int cmd_matroid(Report& rep, const Options& o) {
    const auto n = load_net(rep, o);
    const auto paths = netcode::receiver_paths(n);
    if (o.multicast == !o.receiver.empty())
        throw Error(ErrorCode::InvalidArgument, "give exactly one of --receiver or --multicast");
    Json report;
    if (o.multicast) {
        report = netcode::io::multicast_report(netcode::build_multicast_matroid(n, paths));
    } else {
        std::size_t pos = n.receivers().size();
        for (std::size_t i = 0; i < n.receivers().size(); ++i)
            if (n.nodes()[n.receivers()[i]] == o.receiver || std::to_string(i + 1) == o.receiver) pos = i;
        if (pos == n.receivers().size()) throw Error(ErrorCode::UnknownNode, "receiver '" + o.receiver + "'");
        report = netcode::io::matroid_report(netcode::receiver_gammoid(n, paths[pos]));
    }
    rep.outputs() = report;
    rep.line("ground " + join(report["ground"].get<std::vector<std::string>>()));
    rep.line("rank " + std::to_string(report["rank"].get<std::size_t>()));
    rep.line("bases " + std::to_string(report["bases"].size()));
    for (const auto& b : report["bases"]) rep.line("  {" + join(b.get<std::vector<std::string>>(), ",") + "}");
    if (report.contains("surplus")) {
        rep.line("surplus " + std::to_string(report["surplus"].size()));
        for (const auto& b : report["surplus"]) rep.line("  {" + join(b.get<std::vector<std::string>>(), ",") + "}");
    }
    return 0;
}

int cmd_lift(Report& rep, const Options& o) {
    if (o.to.empty()) throw Error(ErrorCode::InvalidArgument, "--to is required");
    const auto target = netcode::Field::parse(o.to);
    Json out;
    if (!o.matrix.empty()) {
        const auto b = netcode::io::parse_binary_matrix(rep.read_input(o.matrix));
        const auto lift = netcode::lift_matrix(b, target);
        out = {{"transform", netcode::io::matrix_to_json(lift.graphic.transform)},
               {"reduced", netcode::io::labeled_to_json(lift.graphic.reduced)},
               {"signed", netcode::io::labeled_to_json(lift.signed_matrix)},
               {"lifted", {{"field", target.to_string()}, {"global", netcode::io::kernels_to_json(lift.viewed)}}}};
        rep.line("signed:");
        rep.line(indent_matrix(lift.signed_matrix));
        rep.line("over GF(" + target.to_string() + "):");
        rep.line(indent_matrix(as_signed(lift.viewed)));
        write_artifact(o, netcode::io::format_matrix(as_signed(lift.viewed)));
    } else {
        const auto n = load_net(rep, o);
        if (o.code.empty()) throw Error(ErrorCode::InvalidArgument, "--code or --matrix is required");
        const auto code = netcode::io::code_from_json(netcode::io::parse_json(rep.read_input(o.code)), n);
        const auto lift = netcode::lift_solution(code, target);
        const auto lifted = netcode::io::code_to_json(lift.lifted);
        out = {{"transform", netcode::io::matrix_to_json(lift.graphic.transform)},
               {"reduced", netcode::io::labeled_to_json(lift.graphic.reduced)},
               {"signed", netcode::io::labeled_to_json(lift.signed_matrix)},
               {"lifted", lifted},
               {"verified", {{"multicast", true}, {"matroid_compared", lift.matroid_checked}}}};
        rep.line("signed:");
        rep.line(indent_matrix(lift.signed_matrix));
        rep.line("lifted global kernels over GF(" + target.to_string() + "):");
        rep.line(indent_matrix(as_signed(lift.lifted.global())));
        rep.line("linear multicast: yes");
        write_artifact(o, netcode::io::dump(lifted));
    }
    rep.outputs() = out;
    return 0;
}

int cmd_verify_tu(Report& rep, const Options& o) {
    if (o.matrix.empty()) throw Error(ErrorCode::InvalidArgument, "--matrix is required");
    const auto s = netcode::io::parse_matrix_text(rep.read_input(o.matrix));
    const bool tu = netcode::verify_tu(s);
    rep.outputs() = {{"totally_unimodular", tu}};
    rep.line(std::string("totally unimodular: ") + (tu ? "yes" : "no"));
    return tu ? 0 : 1;
}

int cmd_generate(Report& rep, const Options& o) {
    netcode::SeededRng rng(o.seed);
    netcode::RandomNetworkParams p;
    p.dimension = o.dimension;
    const auto n = netcode::random_network(rng, p);
    if (!n) throw Error(ErrorCode::BudgetExceeded, "no network with a reachable receiver was drawn");
    rep.outputs() = {{"seed", o.seed}, {"network", netcode::io::network_to_json(*n)}};
    rep.line(netcode::io::serialize_network(*n));
    write_artifact(o, netcode::io::serialize_network(*n));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear network coding toolkit"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_flag("--json", o.json, "emit the full JSON run report");
        sub->add_option("--out", o.out, "also write the primary artifact to this file");
        sub->add_option("--seed", o.seed, "seed for randomized steps")->default_val(0);
    };
    auto* check = app.add_subcommand("check", "validate a network and report maxflows and paths");
    check->add_option("--network", o.network)->required();
    auto* solve = app.add_subcommand("solve", "find a linear multicast");
    solve->add_option("--network", o.network)->required();
    solve->add_option("--field", o.field, "field order as p^k or q")->default_val("2");
    solve->add_option("--budget-bits", o.budget_bits, "exhaustive search cap as log2 of assignments")->default_val(24);
    auto* verify = app.add_subcommand("verify", "check a code is a linear multicast");
    verify->add_option("--network", o.network)->required();
    verify->add_option("--code", o.code)->required();
    auto* matroid = app.add_subcommand("matroid", "report a receiver gammoid or the multicast matroid");
    matroid->add_option("--network", o.network)->required();
    matroid->add_option("--receiver", o.receiver, "receiver position (1-based) or node id");
    matroid->add_flag("--multicast", o.multicast);
    auto* lift = app.add_subcommand("lift", "lift a GF(2) solution or binary matrix to another field");
    lift->add_option("--network", o.network);
    lift->add_option("--code", o.code);
    lift->add_option("--matrix", o.matrix);
    lift->add_option("--to", o.to)->required();
    auto* tu = app.add_subcommand("verify-tu", "exhaustive total unimodularity check");
    tu->add_option("--matrix", o.matrix)->required();
    auto* gen = app.add_subcommand("generate", "draw a seeded random network");
    gen->add_option("--dimension", o.dimension)->default_val(2);
    for (auto* s : {check, solve, verify, matroid, lift, tu, gen}) common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::vector<std::string> words{"netcode"};
    for (int i = 1; i < argc; ++i) words.emplace_back(argv[i]);
    Report rep(join(words));
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (*check) code = cmd_check(rep, o);
        else if (*solve) code = cmd_solve(rep, o);
        else if (*verify) code = cmd_verify(rep, o);
        else if (*matroid) code = cmd_matroid(rep, o);
        else if (*lift) code = cmd_lift(rep, o);
        else if (*tu) code = cmd_verify_tu(rep, o);
        else code = cmd_generate(rep, o);
    } catch (const Error& e) {
        code = exit_for(e.code());
        rep.outputs() = {{"error", std::string(netcode::to_string(e.code()))}, {"detail", e.what()}};
        rep.line(e.what());
        if (e.code() == ErrorCode::NotGraphic) rep.line("NOT_GRAPHIC");
        std::cerr << "error: " << e.what() << '\n';
    }
    rep.emit(o.json, code);
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "elapsed " << std::fixed << std::setprecision(1) << ms << " ms\n";
    return code;
}
