#include "netdyn/netio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "netdyn/errors.hpp"

namespace netdyn {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_params(const std::vector<double>& params) {
    std::string out;
    for (size_t i = 0; i < params.size(); ++i) {
        if (i > 0) out += ' ';
        out += fmt17(params[i]);
    }
    return out;
}

std::vector<double> parse_params(const std::string& text, const std::string& context) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw FormatError(context + ": malformed number '" + tok +
                              "' in params list");
        out.push_back(v);
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------- GML

struct GmlToken {
    enum Kind { kWord, kNumber, kString, kOpen, kClose, kEnd };
    Kind kind = kEnd;
    std::string text;
    int line = 1;
};

class GmlLexer {
public:
    GmlLexer(std::string text, std::string path)
        : text_(std::move(text)), path_(std::move(path)) {}

    GmlToken next() {
        skip_blank();
        GmlToken tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            tok.kind = GmlToken::kOpen;
        } else if (c == ']') {
            ++pos_;
            tok.kind = GmlToken::kClose;
        } else if (c == '"') {
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\n') ++line_;
                tok.text += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw error("unterminated string", tok.line);
            ++pos_;
            tok.kind = GmlToken::kString;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                tok.text += text_[pos_++];
            tok.kind = GmlToken::kWord;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' ||
                   c == '-' || c == '.') {
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != '[' && text_[pos_] != ']')
                tok.text += text_[pos_++];
            tok.kind = GmlToken::kNumber;
        } else {
            throw error(std::string("unexpected character '") + c + "'", line_);
        }
        return tok;
    }

    FormatError error(const std::string& msg, int line) const {
        return FormatError(path_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    void skip_blank() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string text_;
    std::string path_;
    size_t pos_ = 0;
    int line_ = 1;
};

class GmlParser {
public:
    GmlParser(std::string text, std::string path)
        : lex_(std::move(text), std::move(path)) {
        advance();
    }

    Topology parse() {
        bool saw_graph = false;
        Topology result{0};
        while (cur_.kind != GmlToken::kEnd) {
            if (cur_.kind != GmlToken::kWord)
                throw lex_.error("expected a key name", cur_.line);
            const std::string key = cur_.text;
            const int key_line = cur_.line;
            advance();
            if (key == "graph") {
                if (saw_graph)
                    throw lex_.error("multiple graph sections", key_line);
                if (cur_.kind != GmlToken::kOpen)
                    throw lex_.error("graph key requires a [...] list", cur_.line);
                result = parse_graph();
                saw_graph = true;
            } else {
                skip_value();
            }
        }
        if (!saw_graph) throw lex_.error("no graph section found", cur_.line);
        return result;
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect(GmlToken::Kind kind, const char* what) {
        if (cur_.kind != kind) throw lex_.error(std::string("expected ") + what, cur_.line);
    }

    void skip_value() {
        if (cur_.kind == GmlToken::kNumber || cur_.kind == GmlToken::kString) {
            advance();
            return;
        }
        if (cur_.kind == GmlToken::kOpen) {
            advance();
            while (cur_.kind == GmlToken::kWord) {
                advance();
                skip_value();
            }
            expect(GmlToken::kClose, "']'");
            advance();
            return;
        }
        throw lex_.error("expected a value", cur_.line);
    }

    long parse_int(const char* what) {
        expect(GmlToken::kNumber, "a number");
        const std::string& s = cur_.text;
        size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size())
            throw lex_.error(std::string(what) + " must be an integer, got '" + s + "'",
                             cur_.line);
        advance();
        return v;
    }

    Topology parse_graph() {
        advance(); // consume '['
        std::vector<long> ids;
        struct RawEdge {
            long source, target;
            int line;
        };
        std::vector<RawEdge> raw_edges;

        while (cur_.kind == GmlToken::kWord) {
            const std::string key = cur_.text;
            const int key_line = cur_.line;
            advance();
            if (key == "node") {
                expect(GmlToken::kOpen, "'[' after node");
                advance();
                std::optional<long> id;
                while (cur_.kind == GmlToken::kWord) {
                    const std::string nk = cur_.text;
                    const int nk_line = cur_.line;
                    advance();
                    if (nk == "id") {
                        long v = parse_int("node id");
                        if (v < 0)
                            throw lex_.error("node id must be non-negative", nk_line);
                        id = v;
                    } else {
                        skip_value();
                    }
                }
                expect(GmlToken::kClose, "']' ending node");
                advance();
                if (!id) throw lex_.error("node without id", key_line);
                for (long seen : ids)
                    if (seen == *id)
                        throw lex_.error("duplicate node id " + std::to_string(*id),
                                         key_line);
                ids.push_back(*id);
            } else if (key == "edge") {
                expect(GmlToken::kOpen, "'[' after edge");
                advance();
                std::optional<long> source, target;
                while (cur_.kind == GmlToken::kWord) {
                    const std::string ek = cur_.text;
                    advance();
                    if (ek == "source")
                        source = parse_int("edge source");
                    else if (ek == "target")
                        target = parse_int("edge target");
                    else
                        skip_value();
                }
                expect(GmlToken::kClose, "']' ending edge");
                advance();
                if (!source || !target)
                    throw lex_.error("edge without source and target", key_line);
                raw_edges.push_back({*source, *target, key_line});
            } else {
                skip_value();
            }
        }
        expect(GmlToken::kClose, "']' ending graph");
        advance();

        std::vector<long> order = ids;
        std::sort(order.begin(), order.end());
        const auto index_of = [&](long id) -> int {
            auto it = std::lower_bound(order.begin(), order.end(), id);
            if (it == order.end() || *it != id) return -1;
            return static_cast<int>(it - order.begin());
        };

        Topology g(static_cast<int>(ids.size()));
        for (const auto& e : raw_edges) {
            const int a = index_of(e.source);
            const int b = index_of(e.target);
            if (a < 0)
                throw lex_.error("edge references unknown node id " +
                                     std::to_string(e.source),
                                 e.line);
            if (b < 0)
                throw lex_.error("edge references unknown node id " +
                                     std::to_string(e.target),
                                 e.line);
            if (a == b)
                throw lex_.error("self-loops are not supported", e.line);
            if (!g.has_edge(a, b)) g.add_edge(a, b); // collapse duplicates/directions
        }
        return g;
    }

    GmlLexer lex_;
    GmlToken cur_;
};

// ---------------------------------------------------------------- XML

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct XmlTag {
    std::string name;
    std::map<std::string, std::string> attrs;
    bool closing = false;
    bool self_closing = false;
    int line = 1;

    std::string attr(const std::string& key) const {
        auto it = attrs.find(key);
        return it != attrs.end() ? it->second : std::string();
    }
    bool has_attr(const std::string& key) const { return attrs.count(key) > 0; }
};

// Pull parser for the XML subset the network format uses: tags with
// attributes, text content, comments, processing instructions, and the
// five predefined entities. Namespaces are ignored; no CDATA.
class XmlParser {
public:
    XmlParser(std::string text, std::string path)
        : text_(std::move(text)), path_(std::move(path)) {}

    // Advances to the next tag, skipping whitespace, comments, and
    // declarations. Non-whitespace text before the tag is an error.
    // Returns false at end of input.
    bool next_tag(XmlTag& tag) {
        skip_misc(false);
        if (pos_ >= text_.size()) return false;
        if (text_[pos_] != '<')
            throw error("unexpected text content", line_);
        parse_tag(tag);
        return true;
    }

    // Entity-decoded text from the current position to the next '<'.
    std::string read_text() {
        std::string raw;
        while (pos_ < text_.size() && text_[pos_] != '<') {
            if (text_[pos_] == '\n') ++line_;
            raw += text_[pos_++];
        }
        return decode_entities(raw, line_);
    }

    // Skips the body of an already-opened element up to and including
    // its matching close tag, ignoring nested content entirely.
    void skip_element(const std::string& name, int open_line) {
        int depth = 1;
        XmlTag tag;
        while (depth > 0) {
            skip_misc(true);
            if (pos_ >= text_.size())
                throw error("unterminated <" + name + "> element", open_line);
            parse_tag(tag);
            if (tag.closing) {
                --depth;
                if (depth == 0 && tag.name != name)
                    throw error("mismatched closing tag </" + tag.name + ">", tag.line);
            } else if (!tag.self_closing) {
                ++depth;
            }
        }
    }

    FormatError error(const std::string& msg, int line) const {
        return FormatError(path_ + ":" + std::to_string(line) + ": " + msg);
    }

    int line() const { return line_; }

private:
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
               c == '.' || c == ':';
    }

    void skip_misc(bool allow_text) {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '<') {
                if (text_.compare(pos_, 4, "<!--") == 0) {
                    const size_t end = text_.find("-->", pos_ + 4);
                    if (end == std::string::npos)
                        throw error("unterminated comment", line_);
                    line_ += count_newlines(pos_, end);
                    pos_ = end + 3;
                } else if (text_.compare(pos_, 2, "<?") == 0) {
                    const size_t end = text_.find("?>", pos_ + 2);
                    if (end == std::string::npos)
                        throw error("unterminated processing instruction", line_);
                    line_ += count_newlines(pos_, end);
                    pos_ = end + 2;
                } else if (text_.compare(pos_, 2, "<!") == 0) {
                    const size_t end = text_.find('>', pos_ + 2);
                    if (end == std::string::npos)
                        throw error("unterminated declaration", line_);
                    line_ += count_newlines(pos_, end);
                    pos_ = end + 1;
                } else {
                    break;
                }
            } else if (allow_text) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    int count_newlines(size_t from, size_t to) const {
        int n = 0;
        for (size_t i = from; i < to && i < text_.size(); ++i)
            if (text_[i] == '\n') ++n;
        return n;
    }

    void parse_tag(XmlTag& tag) {
        tag = XmlTag{};
        tag.line = line_;
        ++pos_; // consume '<'
        if (pos_ < text_.size() && text_[pos_] == '/') {
            tag.closing = true;
            ++pos_;
        }
        while (pos_ < text_.size() && name_char(text_[pos_])) tag.name += text_[pos_++];
        if (tag.name.empty()) throw error("malformed tag", tag.line);

        while (true) {
            skip_ws_in_tag();
            if (pos_ >= text_.size()) throw error("unterminated tag", tag.line);
            const char c = text_[pos_];
            if (c == '>') {
                ++pos_;
                return;
            }
            if (c == '/') {
                ++pos_;
                if (pos_ >= text_.size() || text_[pos_] != '>')
                    throw error("malformed tag end", line_);
                ++pos_;
                tag.self_closing = true;
                return;
            }
            if (tag.closing) throw error("attributes on a closing tag", line_);
            std::string attr_name;
            while (pos_ < text_.size() && name_char(text_[pos_])) attr_name += text_[pos_++];
            if (attr_name.empty()) throw error("malformed attribute", line_);
            skip_ws_in_tag();
            if (pos_ >= text_.size() || text_[pos_] != '=')
                throw error("attribute '" + attr_name + "' missing '='", line_);
            ++pos_;
            skip_ws_in_tag();
            if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\''))
                throw error("attribute '" + attr_name + "' missing quoted value", line_);
            const char quote = text_[pos_++];
            std::string raw;
            while (pos_ < text_.size() && text_[pos_] != quote) {
                if (text_[pos_] == '\n') ++line_;
                raw += text_[pos_++];
            }
            if (pos_ >= text_.size()) throw error("unterminated attribute value", line_);
            ++pos_;
            tag.attrs[attr_name] = decode_entities(raw, line_);
        }
    }

    void skip_ws_in_tag() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string decode_entities(const std::string& raw, int line) const {
        std::string out;
        out.reserve(raw.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            const size_t end = raw.find(';', i + 1);
            if (end == std::string::npos)
                throw error("unterminated entity reference", line);
            const std::string name = raw.substr(i + 1, end - i - 1);
            if (name == "amp")
                out += '&';
            else if (name == "lt")
                out += '<';
            else if (name == "gt")
                out += '>';
            else if (name == "quot")
                out += '"';
            else if (name == "apos")
                out += '\'';
            else
                throw error("unsupported entity '&" + name + ";'", line);
            i = end;
        }
        return out;
    }

    std::string text_;
    std::string path_;
    size_t pos_ = 0;
    int line_ = 1;
};

// Key declarations for the network format, in writer order.
struct KeyDecl {
    const char* id;
    const char* scope;
    const char* attr;
};
constexpr KeyDecl kKeys[] = {
    {"d0", "graph", "ne_node_dyn"},  {"d1", "graph", "ne_node_params"},
    {"d2", "graph", "ne_edge_dyn"},  {"d3", "graph", "ne_edge_params"},
    {"d4", "node", "ne_node_dyn"},   {"d5", "node", "ne_node_params"},
    {"d6", "edge", "ne_edge_dyn"},   {"d7", "edge", "ne_edge_params"},
};

bool known_attr_for_scope(const std::string& scope, const std::string& attr) {
    for (const auto& k : kKeys)
        if (scope == k.scope && attr == k.attr) return true;
    return false;
}

} // namespace

void validate_document(const DynNetDocument& doc) {
    int dim = 0;
    if (!doc.node_dyn_name.empty()) {
        try {
            dim = make_node_dynamics(doc.node_dyn_name, doc.node_dyn_params).dim;
        } catch (const ConfigError& e) {
            throw FormatError(std::string("node dynamics: ") + e.what());
        }
    } else if (!doc.node_dyn_params.empty()) {
        throw FormatError("node dynamics params given without a dynamics name");
    }

    if (!doc.edge_dyn_name.empty()) {
        if (dim == 0)
            throw FormatError(
                "edge dynamics require node dynamics (the state dimension "
                "comes from them)");
        try {
            make_edge_coupling(doc.edge_dyn_name, doc.edge_dyn_params, dim);
        } catch (const ConfigError& e) {
            throw FormatError(std::string("edge dynamics: ") + e.what());
        }
    } else if (!doc.edge_dyn_params.empty()) {
        throw FormatError("edge dynamics params given without a dynamics name");
    }

    for (const auto& [node, o] : doc.node_overrides) {
        if (node < 0 || node >= doc.topology.node_count())
            throw FormatError("node override " + std::to_string(node) +
                              " does not name a node");
        if (doc.node_dyn_name.empty())
            throw FormatError("node override without graph-level node dynamics");
        const std::string& name = o.name ? *o.name : doc.node_dyn_name;
        const std::vector<double> params =
            o.params ? *o.params
                     : (name == doc.node_dyn_name ? doc.node_dyn_params
                                                  : std::vector<double>{});
        int override_dim = 0;
        try {
            override_dim = make_node_dynamics(name, params).dim;
        } catch (const ConfigError& e) {
            throw FormatError("node override " + std::to_string(node) + ": " + e.what());
        }
        if (override_dim != dim)
            throw FormatError("node override " + std::to_string(node) +
                              " changes the state dimension");
    }

    for (const auto& [e, o] : doc.edge_overrides) {
        const std::string label =
            "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
        if (e.first < 0 || e.second < 0 || e.first >= doc.topology.node_count() ||
            e.second >= doc.topology.node_count() || !doc.topology.has_edge(e.first, e.second))
            throw FormatError("edge override " + label + " does not name an edge");
        if (doc.edge_dyn_name.empty())
            throw FormatError("edge override without graph-level edge dynamics");
        const std::string& name = o.name ? *o.name : doc.edge_dyn_name;
        const std::vector<double> params =
            o.params ? *o.params
                     : (name == doc.edge_dyn_name ? doc.edge_dyn_params
                                                  : std::vector<double>{});
        try {
            make_edge_coupling(name, params, dim);
        } catch (const ConfigError& err) {
            throw FormatError("edge override " + label + ": " + err.what());
        }
    }
}

NetworkSystem system_from_document(const DynNetDocument& doc) {
    if (doc.node_dyn_name.empty() || doc.edge_dyn_name.empty())
        throw ConfigError("document does not declare default node and edge dynamics");
    NodeDynamics node_dyn = make_node_dynamics(doc.node_dyn_name, doc.node_dyn_params);
    EdgeCoupling edge_dyn =
        make_edge_coupling(doc.edge_dyn_name, doc.edge_dyn_params, node_dyn.dim);
    NetworkSystem sys(doc.topology, std::move(node_dyn), std::move(edge_dyn));
    for (const auto& [node, o] : doc.node_overrides) {
        const std::string& name = o.name ? *o.name : doc.node_dyn_name;
        const std::vector<double> params =
            o.params ? *o.params
                     : (name == doc.node_dyn_name ? doc.node_dyn_params
                                                  : std::vector<double>{});
        sys.set_node_override(node, make_node_dynamics(name, params));
    }
    for (const auto& [e, o] : doc.edge_overrides) {
        const std::string& name = o.name ? *o.name : doc.edge_dyn_name;
        const std::vector<double> params =
            o.params ? *o.params
                     : (name == doc.edge_dyn_name ? doc.edge_dyn_params
                                                  : std::vector<double>{});
        sys.set_edge_override(e, make_edge_coupling(name, params, sys.node_dim()));
    }
    return sys;
}

Topology read_gml(const std::string& path) {
    return GmlParser(read_file(path), path).parse();
}

void write_gml(const Topology& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "graph [\n";
    for (int v = 0; v < g.node_count(); ++v)
        out << "  node [\n    id " << v << "\n  ]\n";
    for (const Edge& e : g.edges())
        out << "  edge [\n    source " << e.first << "\n    target " << e.second
            << "\n  ]\n";
    out << "]\n";
    out.flush();
    if (!out) throw FormatError(path + ": write failed");
}

void write_graphml(const DynNetDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    for (const auto& k : kKeys)
        out << "  <key id=\"" << k.id << "\" for=\"" << k.scope << "\" attr.name=\""
            << k.attr << "\" attr.type=\"string\"/>\n";
    out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    if (!doc.node_dyn_name.empty())
        out << "    <data key=\"d0\">" << xml_escape(doc.node_dyn_name) << "</data>\n";
    if (!doc.node_dyn_params.empty())
        out << "    <data key=\"d1\">" << join_params(doc.node_dyn_params) << "</data>\n";
    if (!doc.edge_dyn_name.empty())
        out << "    <data key=\"d2\">" << xml_escape(doc.edge_dyn_name) << "</data>\n";
    if (!doc.edge_dyn_params.empty())
        out << "    <data key=\"d3\">" << join_params(doc.edge_dyn_params) << "</data>\n";

    for (int v = 0; v < doc.topology.node_count(); ++v) {
        const auto it = doc.node_overrides.find(v);
        const bool has_override =
            it != doc.node_overrides.end() && (it->second.name || it->second.params);
        if (!has_override) {
            out << "    <node id=\"n" << v << "\"/>\n";
            continue;
        }
        out << "    <node id=\"n" << v << "\">\n";
        if (it->second.name)
            out << "      <data key=\"d4\">" << xml_escape(*it->second.name)
                << "</data>\n";
        if (it->second.params)
            out << "      <data key=\"d5\">" << join_params(*it->second.params)
                << "</data>\n";
        out << "    </node>\n";
    }

    size_t edge_idx = 0;
    for (const Edge& e : doc.topology.edges()) {
        const auto it = doc.edge_overrides.find(e);
        const bool has_override =
            it != doc.edge_overrides.end() && (it->second.name || it->second.params);
        out << "    <edge id=\"e" << edge_idx++ << "\" source=\"n" << e.first
            << "\" target=\"n" << e.second << "\"";
        if (!has_override) {
            out << "/>\n";
            continue;
        }
        out << ">\n";
        if (it->second.name)
            out << "      <data key=\"d6\">" << xml_escape(*it->second.name)
                << "</data>\n";
        if (it->second.params)
            out << "      <data key=\"d7\">" << join_params(*it->second.params)
                << "</data>\n";
        out << "    </edge>\n";
    }

    out << "  </graph>\n";
    out << "</graphml>\n";
    out.flush();
    if (!out) throw FormatError(path + ": write failed");
}

DynNetDocument read_graphml(const std::string& path) {
    XmlParser xp(read_file(path), path);

    XmlTag tag;
    if (!xp.next_tag(tag) || tag.closing || tag.name != "graphml")
        throw xp.error("expected <graphml> root element", tag.line);
    if (tag.self_closing) throw xp.error("empty <graphml> element", tag.line);

    struct KeyInfo {
        std::string scope, attr;
    };
    std::map<std::string, KeyInfo> keys;

    struct RawEdge {
        std::string source, target;
        int line;
        std::map<std::string, std::string> data;
    };
    std::vector<std::string> node_ids;
    std::map<std::string, int> node_index;
    std::vector<std::map<std::string, std::string>> node_data;
    std::vector<RawEdge> raw_edges;
    std::map<std::string, std::string> graph_data;
    bool saw_graph = false;

    // Reads one <data> element (tag already parsed) and stores its value
    // if the key is declared for `scope` with one of the format's
    // attribute names; anything else is ignored with a warning.
    const auto handle_data = [&](const XmlTag& data_tag, const std::string& scope,
                                 std::map<std::string, std::string>& dest) {
        if (!data_tag.has_attr("key"))
            throw xp.error("<data> without key attribute", data_tag.line);
        std::string value;
        if (!data_tag.self_closing) {
            value = xp.read_text();
            XmlTag close;
            if (!xp.next_tag(close) || !close.closing || close.name != "data")
                throw xp.error("unterminated <data> element", data_tag.line);
        }
        const std::string key_id = data_tag.attr("key");
        const auto ki = keys.find(key_id);
        if (ki == keys.end()) {
            std::cerr << "warning: " << path << ":" << data_tag.line
                      << ": data references undeclared key '" << key_id
                      << "'; ignored\n";
            return;
        }
        if (ki->second.scope != scope ||
            !known_attr_for_scope(scope, ki->second.attr)) {
            std::cerr << "warning: " << path << ":" << data_tag.line
                      << ": ignoring data for key '" << ki->second.attr << "' (scope '"
                      << ki->second.scope << "') on a " << scope << "\n";
            return;
        }
        dest[ki->second.attr] = value;
    };

    while (xp.next_tag(tag)) {
        if (tag.closing) {
            if (tag.name == "graphml") break;
            throw xp.error("unexpected closing tag </" + tag.name + ">", tag.line);
        }
        if (tag.name == "key") {
            if (!tag.has_attr("id"))
                throw xp.error("<key> without id attribute", tag.line);
            keys[tag.attr("id")] = {tag.attr("for"), tag.attr("attr.name")};
            if (!tag.self_closing) xp.skip_element("key", tag.line);
        } else if (tag.name == "graph") {
            if (saw_graph) throw xp.error("multiple <graph> elements", tag.line);
            saw_graph = true;
            if (!tag.has_attr("edgedefault"))
                throw xp.error("<graph> requires edgedefault=\"undirected\"", tag.line);
            if (tag.attr("edgedefault") != "undirected")
                throw xp.error("directed graphs are not supported (edgedefault=\"" +
                                   tag.attr("edgedefault") + "\")",
                               tag.line);
            if (tag.self_closing) continue;

            XmlTag child;
            while (true) {
                if (!xp.next_tag(child))
                    throw xp.error("unterminated <graph> element", tag.line);
                if (child.closing) {
                    if (child.name == "graph") break;
                    throw xp.error("unexpected closing tag </" + child.name + ">",
                                   child.line);
                }
                if (child.name == "data") {
                    handle_data(child, "graph", graph_data);
                } else if (child.name == "node") {
                    if (!child.has_attr("id"))
                        throw xp.error("<node> without id attribute", child.line);
                    const std::string id = child.attr("id");
                    if (node_index.count(id))
                        throw xp.error("duplicate node id '" + id + "'", child.line);
                    node_index[id] = static_cast<int>(node_ids.size());
                    node_ids.push_back(id);
                    node_data.emplace_back();
                    if (!child.self_closing) {
                        XmlTag inner;
                        while (true) {
                            if (!xp.next_tag(inner))
                                throw xp.error("unterminated <node> element", child.line);
                            if (inner.closing) {
                                if (inner.name == "node") break;
                                throw xp.error("unexpected closing tag </" + inner.name +
                                                   ">",
                                               inner.line);
                            }
                            if (inner.name != "data")
                                throw xp.error("unsupported element <" + inner.name +
                                                   "> inside <node>",
                                               inner.line);
                            handle_data(inner, "node", node_data.back());
                        }
                    }
                } else if (child.name == "edge") {
                    if (!child.has_attr("source") || !child.has_attr("target"))
                        throw xp.error("<edge> requires source and target attributes",
                                       child.line);
                    raw_edges.push_back(
                        {child.attr("source"), child.attr("target"), child.line, {}});
                    if (!child.self_closing) {
                        XmlTag inner;
                        while (true) {
                            if (!xp.next_tag(inner))
                                throw xp.error("unterminated <edge> element", child.line);
                            if (inner.closing) {
                                if (inner.name == "edge") break;
                                throw xp.error("unexpected closing tag </" + inner.name +
                                                   ">",
                                               inner.line);
                            }
                            if (inner.name != "data")
                                throw xp.error("unsupported element <" + inner.name +
                                                   "> inside <edge>",
                                               inner.line);
                            handle_data(inner, "edge", raw_edges.back().data);
                        }
                    }
                } else {
                    throw xp.error("unsupported element <" + child.name + ">",
                                   child.line);
                }
            }
        } else {
            throw xp.error("unsupported element <" + tag.name + ">", tag.line);
        }
    }
    if (!saw_graph) throw xp.error("no <graph> element found", xp.line());

    DynNetDocument doc;
    doc.topology = Topology(static_cast<int>(node_ids.size()));
    std::vector<Edge> edge_keys;
    edge_keys.reserve(raw_edges.size());
    for (const auto& e : raw_edges) {
        const auto a = node_index.find(e.source);
        const auto b = node_index.find(e.target);
        if (a == node_index.end())
            throw xp.error("edge references unknown node '" + e.source + "'", e.line);
        if (b == node_index.end())
            throw xp.error("edge references unknown node '" + e.target + "'", e.line);
        if (a->second == b->second)
            throw xp.error("self-loops are not supported", e.line);
        if (doc.topology.has_edge(a->second, b->second))
            throw xp.error("duplicate edge '" + e.source + "'-'" + e.target + "'",
                           e.line);
        doc.topology.add_edge(a->second, b->second);
        edge_keys.push_back(make_edge(a->second, b->second));
    }

    const auto graph_value = [&](const char* attr) -> std::string {
        const auto it = graph_data.find(attr);
        return it != graph_data.end() ? it->second : std::string();
    };
    doc.node_dyn_name = trim(graph_value("ne_node_dyn"));
    doc.node_dyn_params = parse_params(graph_value("ne_node_params"),
                                       path + ": graph ne_node_params");
    doc.edge_dyn_name = trim(graph_value("ne_edge_dyn"));
    doc.edge_dyn_params = parse_params(graph_value("ne_edge_params"),
                                       path + ": graph ne_edge_params");

    for (size_t i = 0; i < node_data.size(); ++i) {
        const auto& data = node_data[i];
        if (data.empty()) continue;
        DynOverride o;
        if (const auto it = data.find("ne_node_dyn"); it != data.end())
            o.name = trim(it->second);
        if (const auto it = data.find("ne_node_params"); it != data.end())
            o.params = parse_params(it->second, path + ": node '" + node_ids[i] +
                                                    "' ne_node_params");
        doc.node_overrides[static_cast<int>(i)] = std::move(o);
    }
    for (size_t i = 0; i < raw_edges.size(); ++i) {
        const auto& data = raw_edges[i].data;
        if (data.empty()) continue;
        DynOverride o;
        if (const auto it = data.find("ne_edge_dyn"); it != data.end())
            o.name = trim(it->second);
        if (const auto it = data.find("ne_edge_params"); it != data.end())
            o.params = parse_params(it->second, path + ": edge '" + raw_edges[i].source +
                                                    "'-'" + raw_edges[i].target +
                                                    "' ne_edge_params");
        doc.edge_overrides[edge_keys[i]] = std::move(o);
    }

    validate_document(doc);
    return doc;
}

void write_log_csv(const std::vector<IterationRecord>& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "iteration,temperature,Q_current,Q_best,accepted,diameter,clustering,girth\n";
    for (const auto& rec : log) {
        out << rec.iteration << ',' << fmt17(rec.temperature) << ','
            << fmt17(rec.q_current) << ',' << fmt17(rec.q_best) << ','
            << (rec.accepted ? 1 : 0) << ',';
        if (rec.analysis) {
            if (rec.analysis->diameter) out << *rec.analysis->diameter;
            out << ',' << fmt17(rec.analysis->clustering) << ',';
            if (rec.analysis->girth)
                out << *rec.analysis->girth;
            else
                out << "acyclic";
        } else {
            out << ",,";
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw FormatError(path + ": write failed");
}

} // namespace netdyn
