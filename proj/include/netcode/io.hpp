#pragma once

// Text formats: network and code documents (JSON), labelled matrices (plain text),
// and matroid reports.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcode/code.hpp"
#include "netcode/error.hpp"
#include "netcode/field.hpp"
#include "netcode/field_lift.hpp"
#include "netcode/matroid.hpp"
#include "netcode/multicast_matroid.hpp"
#include "netcode/network.hpp"

namespace netcode::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

template <class T>
T field_as(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::Parse, std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace detail

// ---- networks ----

inline MulticastNetwork network_from_json(const Json& j) {
    const auto dimension = detail::field_as<long long>(j, "dimension");
    if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
    std::vector<Link> links;
    const auto raw = detail::field_as<Json>(j, "links");
    if (!raw.is_array()) throw Error(ErrorCode::Parse, "field 'links' must be an array");
    for (const auto& l : raw)
        links.push_back({detail::field_as<std::string>(l, "id"), detail::field_as<std::string>(l, "tail"),
                         detail::field_as<std::string>(l, "head")});
    return MulticastNetwork::create(static_cast<std::size_t>(dimension),
                                    detail::field_as<std::vector<std::string>>(j, "nodes"), std::move(links),
                                    detail::field_as<std::string>(j, "source"),
                                    detail::field_as<std::vector<std::string>>(j, "receivers"));
}

inline MulticastNetwork parse_network(const std::string& text) { return network_from_json(parse_json(text)); }
inline MulticastNetwork load_network(const std::string& path) { return parse_network(read_file(path)); }

inline Json network_to_json(const MulticastNetwork& n) {
    Json links = Json::array();
    for (auto e : n.real_links()) {
        const auto& l = n.links()[e];
        links.push_back({{"id", l.id}, {"tail", *l.tail}, {"head", l.head}});
    }
    return {{"dimension", n.dimension()},
            {"nodes", n.nodes()},
            {"links", std::move(links)},
            {"source", n.source_id()},
            {"receivers", n.receiver_ids()}};
}

inline std::string serialize_network(const MulticastNetwork& n) { return dump(network_to_json(n)); }

// ---- matrices and codes ----

inline Json matrix_to_json(const FieldMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json kernels_to_json(const GlobalKernelMatrix& g) { return {{"labels", g.labels}, {"rows", matrix_to_json(g.matrix)}}; }

inline GlobalKernelMatrix kernels_from_json(const Json& j, const Field& field) {
    auto labels = detail::field_as<std::vector<std::string>>(j, "labels");
    const auto rows = detail::field_as<std::vector<std::vector<long long>>>(j, "rows");
    FieldMatrix m(field, rows.size(), labels.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != labels.size()) throw Error(ErrorCode::Parse, "row length differs from label count");
        for (std::size_t c = 0; c < labels.size(); ++c) {
            const auto v = rows[r][c];
            if (v < 0 || v >= field.order()) throw Error(ErrorCode::Parse, "entry outside GF(" + field.to_string() + ")");
            m(r, c) = static_cast<Field::Value>(v);
        }
    }
    return {std::move(m), std::move(labels)};
}

inline Json code_to_json(const LinearCode& code) {
    const auto& n = code.network();
    Json local = Json::array();
    for (std::size_t i = 0; i < n.adjacent_pairs().size(); ++i) {
        const auto [d, e] = n.adjacent_pairs()[i];
        local.push_back({{"d", n.links()[d].id}, {"e", n.links()[e].id}, {"k", code.local().values[i]}});
    }
    return {{"field", code.field().to_string()}, {"local", std::move(local)}, {"global", kernels_to_json(code.global())}};
}

/// Reads a code document against `n`. Local form: pairs not listed are zero. Global form: columns
/// are matched to links by label and local kernels are recovered.
inline LinearCode code_from_json(const Json& j, const MulticastNetwork& n) {
    const Field field = [&] {
        try {
            return Field::parse(detail::field_as<std::string>(j, "field"));
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, e.what());
        }
    }();
    if (j.contains("local")) {
        auto local = LocalKernels::zeros(n, field);
        for (const auto& entry : detail::field_as<Json>(j, "local")) {
            const auto d = detail::field_as<std::string>(entry, "d");
            const auto e = detail::field_as<std::string>(entry, "e");
            const auto k = detail::field_as<long long>(entry, "k");
            if (!n.has_link(d) || !n.has_link(e)) throw Error(ErrorCode::DanglingReference, "pair (" + d + ", " + e + ")");
            const std::pair<std::size_t, std::size_t> key{n.link_index(d), n.link_index(e)};
            const auto& pairs = n.adjacent_pairs();
            const auto it = std::find(pairs.begin(), pairs.end(), key);
            if (it == pairs.end()) throw Error(ErrorCode::InvalidArgument, "(" + d + ", " + e + ") is not an adjacent pair");
            if (k >= static_cast<long long>(field.order()) || (k < 0 && field.degree() != 1))
                throw Error(ErrorCode::Parse, "kernel value outside GF(" + field.to_string() + ")");
            local.values[static_cast<std::size_t>(it - pairs.begin())] = field.from_signed(static_cast<int>(k));
        }
        return LinearCode(n, std::move(local));
    }
    if (j.contains("global")) {
        const auto given = kernels_from_json(j.at("global"), field);
        if (given.matrix.rows() != n.dimension()) throw Error(ErrorCode::Parse, "global kernel rows differ from dimension");
        GlobalKernelMatrix ordered{FieldMatrix(field, n.dimension(), n.links().size()), link_labels(n)};
        std::vector<bool> seen(n.links().size(), false);
        for (std::size_t c = 0; c < given.labels.size(); ++c) {
            if (!n.has_link(given.labels[c])) throw Error(ErrorCode::DanglingReference, "link '" + given.labels[c] + "'");
            const auto idx = n.link_index(given.labels[c]);
            seen[idx] = true;
            for (std::size_t r = 0; r < n.dimension(); ++r) ordered.matrix(r, idx) = given.matrix(r, c);
        }
        for (auto e : n.imaginary_links())
            if (!seen[e]) ordered.matrix(e, e) = field.one();
        for (std::size_t e = 0; e < seen.size(); ++e)
            if (!seen[e] && !n.is_imaginary(e)) throw Error(ErrorCode::Parse, "missing column '" + n.links()[e].id + "'");
        return LinearCode(n, recover_local_kernels(n, ordered));
    }
    throw Error(ErrorCode::Parse, "code document needs 'local' or 'global'");
}

inline LinearCode load_code(const std::string& path, const MulticastNetwork& n) {
    return code_from_json(parse_json(read_file(path)), n);
}

/// Header line of labels, then one row per line; '#' starts a comment line.
inline SignedMatrix parse_matrix_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    SignedMatrix m;
    bool header = false;
    std::vector<int> entries;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        if (!header) {
            std::string label;
            while (ls >> label) m.labels.push_back(label);
            header = true;
            continue;
        }
        std::string token;
        std::size_t count = 0;
        while (ls >> token) {
            try {
                std::size_t used = 0;
                entries.push_back(std::stoi(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw Error(ErrorCode::Parse, "bad matrix entry '" + token + "'");
            }
            ++count;
        }
        if (count != m.labels.size())
            throw Error(ErrorCode::Parse, "row " + std::to_string(m.rows + 1) + " has " + std::to_string(count) +
                                              " entries, expected " + std::to_string(m.labels.size()));
        ++m.rows;
    }
    if (!header || m.rows == 0) throw Error(ErrorCode::Parse, "empty matrix");
    m.entries = std::move(entries);
    return m;
}

inline BinaryMatrix to_binary_matrix(const SignedMatrix& s) {
    BinaryMatrix b(s.rows, s.labels);
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        if (s.entries[i] != 0 && s.entries[i] != 1) throw Error(ErrorCode::Parse, "binary matrix entries must be 0 or 1");
        b.entries[i] = static_cast<std::uint8_t>(s.entries[i]);
    }
    return b;
}

inline BinaryMatrix parse_binary_matrix(const std::string& text) { return to_binary_matrix(parse_matrix_text(text)); }

template <class T>
std::string format_matrix(const LabeledMatrix<T>& m) {
    std::ostringstream out;
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m.labels[c];
    out << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << static_cast<long long>(m(r, c));
        out << '\n';
    }
    return out.str();
}

template <class T>
Json labeled_to_json(const LabeledMatrix<T>& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(static_cast<long long>(m(r, c)));
        rows.push_back(std::move(row));
    }
    return {{"labels", m.labels}, {"rows", std::move(rows)}};
}

// ---- matroid reports ----

inline Json matroid_report(const Matroid& m, const EnumerationBudget& budget = {}) {
    Json bases = Json::array();
    for (const auto& b : m.bases(budget)) bases.push_back(m.labels(b));
    Json ground = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) ground.push_back(m.label(i));
    return {{"ground", std::move(ground)}, {"rank", m.rank()}, {"bases", std::move(bases)}};
}

inline Json multicast_report(const MulticastMatroid& mm, const EnumerationBudget& budget = {}) {
    Json report = matroid_report(mm.matroid, budget);
    Json steps = Json::array();
    for (const auto& s : mm.provenance)
        steps.push_back({{"receiver", s.receiver},
                         {"path", s.path},
                         {"removed", s.removed},
                         {"added", s.added},
                         {"from", mm.matroid.labels(s.from)},
                         {"to", mm.matroid.labels(s.to)}});
    Json surplus = Json::array();
    for (const auto& b : mm.surplus) surplus.push_back(mm.matroid.labels(b));
    report["provenance"] = std::move(steps);
    report["surplus"] = std::move(surplus);
    return report;
}

}  // namespace netcode::io
