#include "skipalign/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "skipalign/errors.hpp"

namespace skipalign {

namespace {

using ordered_json = nlohmann::ordered_json;

bool label_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

struct TreeParser {
    const std::string& s;
    std::size_t i = 0;

    [[noreturn]] void fail(const std::string& what) const {
        raise(Errc::SyntaxError, what + " at offset " + std::to_string(i + 1));
    }
    void ws() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    std::string quoted() {
        ++i;  // opening quote
        std::string out;
        while (true) {
            if (i >= s.size()) fail("unterminated quoted label");
            char c = s[i];
            if (c == '\'') {
                if (i + 1 < s.size() && s[i + 1] == '\'') {
                    out.push_back('\'');
                    i += 2;
                    continue;
                }
                ++i;
                break;
            }
            out.push_back(c);
            ++i;
        }
        if (out.empty()) fail("empty quoted label");
        return out;
    }

    std::vector<TreeNode> children() {
        ws();
        if (!eat('(')) fail("expected '('");
        std::vector<TreeNode> kids;
        while (true) {
            kids.push_back(node());
            ws();
            if (eat(',')) continue;
            if (eat(')')) break;
            fail("expected ',' or ')'");
        }
        return kids;
    }

    TreeNode node() {
        ws();
        if (i >= s.size()) fail("expected a block");
        char c = s[i];
        if (c == '\'') return TreeNode::activity(quoted());
        if (c == '-') {
            if (i + 1 >= s.size() || s[i + 1] != '>') fail("expected '->'");
            i += 2;
            return TreeNode::op(BlockKind::Seq, children());
        }
        if (c == '+') {
            ++i;
            return TreeNode::op(BlockKind::And, children());
        }
        if (c == '*') {
            ++i;
            std::vector<TreeNode> kids = children();
            if (kids.size() != 2) fail("loop takes exactly two blocks");
            return TreeNode::op(BlockKind::Loop, std::move(kids));
        }
        if (label_char(c)) {
            std::size_t start = i;
            while (i < s.size() && label_char(s[i])) ++i;
            std::string ident = s.substr(start, i - start);
            std::size_t save = i;
            ws();
            if (ident == "X" && i < s.size() && s[i] == '(')
                return TreeNode::op(BlockKind::Xor, children());
            i = save;
            if (ident == "tau") return TreeNode::tau();
            return TreeNode::activity(ident);
        }
        fail("expected a block");
    }
};

void print_node(const TreeNode& t, std::string& out) {
    switch (t.kind) {
    case BlockKind::Activity: {
        bool plain = t.label != "tau" && !t.label.empty();
        for (char c : t.label)
            if (!label_char(c)) plain = false;
        if (plain) {
            out += t.label;
        } else {
            out += '\'';
            for (char c : t.label) {
                out += c;
                if (c == '\'') out += '\'';
            }
            out += '\'';
        }
        return;
    }
    case BlockKind::Tau:
        out += "tau";
        return;
    case BlockKind::Seq: out += "->("; break;
    case BlockKind::Xor: out += "X("; break;
    case BlockKind::And: out += "+("; break;
    case BlockKind::Loop: out += "*("; break;
    }
    for (std::size_t k = 0; k < t.children.size(); ++k) {
        if (k) out += ',';
        print_node(t.children[k], out);
    }
    out += ')';
}

std::vector<std::string> split_lines(const std::string& content) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : content) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

std::vector<std::string> split_csv_row(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        raise(Errc::FormatError, "unterminated quote on line " + std::to_string(line_no));
    fields.push_back(std::move(cur));
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        std::size_t semi = s.find(';', i);
        std::string ent = semi == std::string::npos ? "" : s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else {
            out += s[i++];
            continue;
        }
        i = semi + 1;
    }
    return out;
}

struct XmlTag {
    std::string name;
    bool closing = false;
    bool self_closing = false;
    std::map<std::string, std::string> attrs;
};

// Minimal scanner over the tag stream; attribute values must be double-quoted.
struct XesScanner {
    const std::string& s;
    std::size_t i = 0;

    bool next(XmlTag& tag) {
        while (true) {
            std::size_t lt = s.find('<', i);
            if (lt == std::string::npos) return false;
            if (s.compare(lt, 4, "<!--") == 0) {
                std::size_t end = s.find("-->", lt);
                if (end == std::string::npos)
                    raise(Errc::FormatError, "unterminated XML comment");
                i = end + 3;
                continue;
            }
            if (s.compare(lt, 2, "<?") == 0) {
                std::size_t end = s.find("?>", lt);
                if (end == std::string::npos)
                    raise(Errc::FormatError, "unterminated XML declaration");
                i = end + 2;
                continue;
            }
            std::size_t j = lt + 1;
            bool in_quote = false;
            while (j < s.size() && (in_quote || s[j] != '>')) {
                if (s[j] == '"') in_quote = !in_quote;
                ++j;
            }
            if (j >= s.size()) raise(Errc::FormatError, "unterminated XML tag");
            parse_tag(s.substr(lt + 1, j - lt - 1), tag);
            i = j + 1;
            return true;
        }
    }

    static void parse_tag(const std::string& body, XmlTag& tag) {
        tag = XmlTag{};
        std::size_t k = 0;
        if (k < body.size() && body[k] == '/') {
            tag.closing = true;
            ++k;
        }
        std::size_t start = k;
        while (k < body.size() && !std::isspace((unsigned char)body[k]) && body[k] != '/')
            ++k;
        tag.name = body.substr(start, k - start);
        std::string rest = body.substr(k);
        if (!rest.empty() && rest.back() == '/') {
            tag.self_closing = true;
            rest.pop_back();
        }
        std::size_t p = 0;
        while (p < rest.size()) {
            while (p < rest.size() && std::isspace((unsigned char)rest[p])) ++p;
            std::size_t name_start = p;
            while (p < rest.size() && rest[p] != '=' &&
                   !std::isspace((unsigned char)rest[p]))
                ++p;
            if (name_start == p) break;
            std::string name = rest.substr(name_start, p - name_start);
            while (p < rest.size() && std::isspace((unsigned char)rest[p])) ++p;
            if (p >= rest.size() || rest[p] != '=') continue;  // valueless attr
            ++p;
            while (p < rest.size() && std::isspace((unsigned char)rest[p])) ++p;
            if (p >= rest.size() || rest[p] != '"')
                raise(Errc::FormatError, "attribute value must be double-quoted");
            std::size_t vstart = ++p;
            while (p < rest.size() && rest[p] != '"') ++p;
            if (p >= rest.size())
                raise(Errc::FormatError, "unterminated attribute value");
            tag.attrs[name] = xml_unescape(rest.substr(vstart, p - vstart));
            ++p;
        }
    }
};

std::string block_name(BlockId b) { return "B" + std::to_string(b); }

BlockId parse_block_name(const std::string& s, const Model& m) {
    if (s.size() < 2 || s[0] != 'B')
        raise(Errc::FormatError, "bad block id '" + s + "'");
    for (std::size_t k = 1; k < s.size(); ++k)
        if (!std::isdigit((unsigned char)s[k]))
            raise(Errc::FormatError, "bad block id '" + s + "'");
    unsigned long v = std::strtoul(s.c_str() + 1, nullptr, 10);
    if (v >= m.size())
        raise(Errc::FormatError, "block id '" + s + "' outside the model");
    return (BlockId)v;
}

const char* kind_name(MoveKind k) {
    switch (k) {
    case MoveKind::Log: return "log";
    case MoveKind::Sync: return "sync";
    case MoveKind::Model: return "model";
    case MoveKind::Skip: return "skip";
    }
    return "?";
}

ordered_json move_to_json(const Model& m, const Move& mv) {
    ordered_json j;
    j["kind"] = kind_name(mv.kind);
    if (mv.kind == MoveKind::Log || mv.kind == MoveKind::Sync ||
        (mv.kind == MoveKind::Model && !mv.label.empty()))
        j["label"] = mv.label;
    if (mv.kind != MoveKind::Log) j["block"] = block_name(mv.block);
    j["cost"] = move_cost(m, mv);
    return j;
}

Move move_from_json(const ordered_json& j, const Model& m) {
    std::string kind = j.at("kind").get<std::string>();
    Move mv;
    if (kind == "log") {
        mv = Move::log(j.at("label").get<std::string>());
    } else if (kind == "sync") {
        mv = Move::sync(j.at("label").get<std::string>(),
                        parse_block_name(j.at("block").get<std::string>(), m));
    } else if (kind == "model") {
        mv = Move::model(parse_block_name(j.at("block").get<std::string>(), m));
    } else if (kind == "skip") {
        mv = Move::skip(parse_block_name(j.at("block").get<std::string>(), m));
    } else {
        raise(Errc::FormatError, "unknown move kind '" + kind + "'");
    }
    if (j.contains("cost") && j.at("cost").get<int>() != move_cost(m, mv))
        raise(Errc::FormatError, "move cost does not match the cost function");
    return mv;
}

}  // namespace

TreeNode parse_tree_text(const std::string& text) {
    TreeParser p{text};
    TreeNode t = p.node();
    p.ws();
    if (p.i != text.size()) p.fail("trailing input");
    return t;
}

std::string print_tree(const TreeNode& t) {
    if (t.empty_marker) raise(Errc::EmptyTree, "cannot print an empty tree");
    std::string out;
    print_node(t, out);
    return out;
}

std::string print_tree(const Model& m) { return print_tree(m.tree()); }

std::vector<CaseTrace> parse_csv_log(const std::string& content) {
    std::vector<std::string> lines = split_lines(content);
    std::size_t first = 0;
    while (first < lines.size() && trimmed(lines[first]).empty()) ++first;
    if (first == lines.size())
        raise(Errc::FormatError, "empty CSV file");
    std::vector<std::string> header = split_csv_row(lines[first], first + 1);
    for (std::string& h : header) h = trimmed(h);
    auto column = [&](const std::string& name) -> std::ptrdiff_t {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    std::ptrdiff_t case_col = column("case_id");
    std::ptrdiff_t act_col = column("activity");
    std::ptrdiff_t ts_col = column("timestamp");
    if (case_col < 0) raise(Errc::MissingColumn, "case_id");
    if (act_col < 0) raise(Errc::MissingColumn, "activity");

    struct Row {
        std::string ts;
        std::size_t seq;
        std::string activity;
    };
    std::vector<std::string> case_order;
    std::map<std::string, std::vector<Row>> cases;
    std::size_t need = (std::size_t)std::max({case_col, act_col, ts_col}) + 1;
    std::size_t seq = 0;
    for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
        if (trimmed(lines[ln]).empty()) continue;
        std::vector<std::string> f = split_csv_row(lines[ln], ln + 1);
        if (f.size() < need)
            raise(Errc::FormatError, "line " + std::to_string(ln + 1) + ": expected at least " +
                                         std::to_string(need) + " fields");
        const std::string& cid = f[(std::size_t)case_col];
        const std::string& act = f[(std::size_t)act_col];
        if (act.empty())
            raise(Errc::FormatError, "line " + std::to_string(ln + 1) + ": empty activity");
        auto [it, fresh] = cases.try_emplace(cid);
        if (fresh) case_order.push_back(cid);
        it->second.push_back(Row{ts_col >= 0 ? f[(std::size_t)ts_col] : "", seq++, act});
    }

    bool numeric = ts_col >= 0;
    if (numeric) {
        for (const auto& [cid, rows] : cases)
            for (const Row& r : rows) {
                double v;
                if (!parse_number(r.ts, v)) {
                    numeric = false;
                    break;
                }
            }
    }
    std::vector<CaseTrace> out;
    out.reserve(case_order.size());
    for (const std::string& cid : case_order) {
        std::vector<Row>& rows = cases[cid];
        if (ts_col >= 0) {
            std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
                if (numeric) {
                    double va = 0, vb = 0;
                    parse_number(a.ts, va);
                    parse_number(b.ts, vb);
                    return va < vb;
                }
                return a.ts < b.ts;
            });
        }
        Trace t;
        t.reserve(rows.size());
        for (const Row& r : rows) t.push_back(r.activity);
        out.emplace_back(cid, std::move(t));
    }
    return out;
}

std::vector<CaseTrace> parse_xes_log(const std::string& content,
                                     std::vector<std::string>* warnings) {
    XesScanner scan{content};
    XmlTag tag;
    std::vector<CaseTrace> out;
    bool in_trace = false, in_event = false;
    std::string case_name, event_name;
    bool have_event_name = false;
    Trace events;
    std::size_t ignored = 0;

    while (scan.next(tag)) {
        if (tag.name == "trace") {
            if (tag.closing) {
                if (!in_trace) raise(Errc::FormatError, "</trace> without <trace>");
                std::string id = case_name.empty()
                                     ? "trace-" + std::to_string(out.size() + 1)
                                     : case_name;
                out.emplace_back(std::move(id), std::move(events));
                events.clear();
                in_trace = false;
            } else {
                if (in_trace) raise(Errc::FormatError, "nested <trace>");
                if (tag.self_closing) {
                    out.emplace_back("trace-" + std::to_string(out.size() + 1), Trace{});
                } else {
                    in_trace = true;
                    case_name.clear();
                    events.clear();
                }
            }
        } else if (tag.name == "event") {
            if (!in_trace) {
                ++ignored;
                continue;
            }
            if (tag.closing) {
                if (!in_event) raise(Errc::FormatError, "</event> without <event>");
                if (!have_event_name)
                    raise(Errc::FormatError, "event without concept:name");
                events.push_back(event_name);
                in_event = false;
            } else {
                if (in_event) raise(Errc::FormatError, "nested <event>");
                if (tag.self_closing)
                    raise(Errc::FormatError, "event without concept:name");
                in_event = true;
                have_event_name = false;
                event_name.clear();
            }
        } else if (tag.name == "string" && !tag.closing) {
            auto key = tag.attrs.find("key");
            auto value = tag.attrs.find("value");
            if (key != tag.attrs.end() && key->second == "concept:name" &&
                value != tag.attrs.end()) {
                if (in_event) {
                    if (have_event_name) {
                        ++ignored;
                    } else {
                        event_name = value->second;
                        have_event_name = true;
                    }
                } else if (in_trace) {
                    case_name = value->second;
                } else {
                    ++ignored;
                }
            } else {
                ++ignored;
            }
        } else if (tag.name != "log" && !tag.closing) {
            ++ignored;  // dates, ints, extensions, classifiers, globals, ...
        }
    }
    if (in_trace) raise(Errc::FormatError, "unterminated <trace>");
    if (ignored > 0 && warnings)
        warnings->push_back("ignored " + std::to_string(ignored) +
                            " elements or attributes outside the concept:name subset");
    return out;
}

std::vector<CaseTrace> parse_log_file(const std::string& path, LogFormat format,
                                      std::vector<std::string>* warnings) {
    std::string content = read_file(path);
    return format == LogFormat::Csv ? parse_csv_log(content)
                                    : parse_xes_log(content, warnings);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) raise(Errc::IoError, "read failure on '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::IoError, "cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) raise(Errc::IoError, "write failure on '" + path + "'");
}

std::string write_results(const ResultDocument& doc) {
    Model m = validate_model(parse_tree_text(doc.model_text));
    ordered_json j;
    j["schema"] = "skipalign-results/1";
    j["model"] = doc.model_text;
    j["traces"] = ordered_json::array();
    for (const TraceResult& t : doc.traces) {
        ordered_json jt;
        jt["id"] = t.id;
        jt["case_ids"] = t.case_ids;
        jt["count"] = t.case_ids.size();
        jt["events"] = t.events;
        if (!t.error.empty()) {
            jt["error"] = t.error;
        } else {
            jt["optimal_cost"] = t.optimal_cost;
            ordered_json ja = ordered_json::array();
            for (const AlignmentResult& a : t.alignments) {
                ordered_json je;
                je["cost"] = a.cost;
                je["moves"] = ordered_json::array();
                for (const Move& mv : a.moves) je["moves"].push_back(move_to_json(m, mv));
                ja.push_back(std::move(je));
            }
            jt["alignments"] = std::move(ja);
        }
        j["traces"].push_back(std::move(jt));
    }
    return j.dump(2) + "\n";
}

ResultDocument load_results(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("bad JSON: ") + e.what());
    }
    try {
        if (j.at("schema").get<std::string>() != "skipalign-results/1")
            raise(Errc::FormatError, "unknown schema version");
        ResultDocument doc;
        doc.model_text = j.value("model", std::string{});
        Model m;
        bool have_model = !doc.model_text.empty();
        if (have_model) m = validate_model(parse_tree_text(doc.model_text));
        for (const ordered_json& jt : j.at("traces")) {
            TraceResult t;
            t.id = jt.at("id").get<std::string>();
            t.case_ids = jt.at("case_ids").get<std::vector<std::string>>();
            t.events = jt.at("events").get<Trace>();
            if (jt.at("count").get<std::size_t>() != t.case_ids.size())
                raise(Errc::FormatError, "count does not match case_ids");
            if (jt.contains("error")) {
                t.error = jt.at("error").get<std::string>();
                if (t.error.empty()) raise(Errc::FormatError, "empty error string");
                doc.traces.push_back(std::move(t));
                continue;
            }
            t.optimal_cost = jt.at("optimal_cost").get<int>();
            for (const ordered_json& je : jt.at("alignments")) {
                if (!have_model)
                    raise(Errc::FormatError, "alignments present but no model embedded");
                AlignmentResult a;
                a.cost = je.at("cost").get<int>();
                for (const ordered_json& jm : je.at("moves"))
                    a.moves.push_back(move_from_json(jm, m));
                if (total_cost(m, a.moves) != a.cost)
                    raise(Errc::FormatError, "alignment cost does not match its moves");
                if (a.cost != t.optimal_cost)
                    raise(Errc::FormatError, "alignment cost differs from optimal_cost");
                if (!validate_skip_alignment(m, t.events, SkipAlignment{a.moves}))
                    raise(Errc::FormatError, "alignment does not validate against the model");
                t.alignments.push_back(std::move(a));
            }
            doc.traces.push_back(std::move(t));
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::FormatError, std::string("bad result document: ") + e.what());
    }
}

}  // namespace skipalign
