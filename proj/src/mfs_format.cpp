#include "mori/mfs_format.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mori {

ParseError::ParseError(std::string file, int line, int col, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + message),
      file_(std::move(file)), line_(line), col_(col), message_(message)
{
}

namespace {

struct Value {
    enum class Kind { Integer, String, Word, Vector, Matrix } kind = Kind::Integer;
    Int integer = 0;
    std::string text;
    IntVector vec;
    std::vector<IntVector> rows;
    int line = 0;
    int col = 0;
    int key_col = 0;
};

const char* kind_name(Value::Kind k)
{
    switch (k) {
    case Value::Kind::Integer: return "an integer";
    case Value::Kind::String: return "a quoted string";
    case Value::Kind::Word: return "a bare word";
    case Value::Kind::Vector: return "an integer vector";
    case Value::Kind::Matrix: return "an integer matrix";
    }
    return "?";
}

struct Section {
    std::string header;
    int line = 0;
    std::map<std::string, Value> values;
};

class Lexer {
public:
    Lexer(std::string_view text, const std::string& file) : file_(file)
    {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            const auto end = nl == std::string_view::npos ? text.size() : nl;
            std::string_view line = text.substr(start, end - start);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            lines_.emplace_back(line);
            if (nl == std::string_view::npos)
                break;
            start = nl + 1;
        }
    }

    [[noreturn]] void fail(int line, int col, const std::string& msg) const { throw ParseError(file_, line, col, msg); }

    std::vector<Section> sections(const char* expected_header)
    {
        std::vector<Section> out;
        for (row_ = 0; row_ < lines_.size(); ++row_) {
            pos_ = 0;
            skip_space();
            if (at_end_or_comment())
                continue;
            const int line = static_cast<int>(row_) + 1;
            if (peek() == '[') {
                const auto close = cur().find(']', pos_);
                if (close == std::string::npos)
                    fail(line, col(), "unterminated section header");
                Section s;
                s.header = cur().substr(pos_ + 1, close - pos_ - 1);
                s.line = line;
                if (s.header != expected_header)
                    fail(line, col() + 1, "unknown section [" + s.header + "], expected [" + expected_header + "]");
                pos_ = close + 1;
                skip_space();
                if (!at_end_or_comment())
                    fail(line, col(), "unexpected text after section header");
                out.push_back(std::move(s));
                continue;
            }
            const int key_col = col();
            std::string key;
            while (pos_ < cur().size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                key += cur()[pos_++];
            if (key.empty())
                fail(line, key_col, "expected a key");
            skip_space();
            if (pos_ >= cur().size() || peek() != '=')
                fail(line, col(), "expected '=' after key '" + key + "'");
            ++pos_;
            skip_space();
            Value v = value();
            v.key_col = key_col;
            skip_space();
            if (!at_end_or_comment())
                fail(static_cast<int>(row_) + 1, col(), "unexpected text after value");
            if (out.empty())
                fail(line, key_col, "key '" + key + "' appears before the [" + std::string(expected_header) + "] header");
            if (out.back().values.count(key))
                fail(line, key_col, "duplicate key '" + key + "'");
            out.back().values.emplace(std::move(key), std::move(v));
        }
        return out;
    }

private:
    const std::string& cur() const { return lines_[row_]; }
    char peek() const { return cur()[pos_]; }
    int col() const { return static_cast<int>(pos_) + 1; }
    void skip_space()
    {
        while (pos_ < cur().size() && (peek() == ' ' || peek() == '\t'))
            ++pos_;
    }
    bool at_end_or_comment() const { return pos_ >= cur().size() || peek() == '#'; }

    // whitespace and comments, continuing onto following lines (inside brackets)
    void skip_blank_multiline()
    {
        for (;;) {
            skip_space();
            if (!at_end_or_comment())
                return;
            if (row_ + 1 >= lines_.size())
                fail(static_cast<int>(row_) + 1, col(), "unterminated bracket");
            ++row_;
            pos_ = 0;
        }
    }

    Int integer_token()
    {
        const int line = static_cast<int>(row_) + 1, c = col();
        std::size_t end = pos_;
        if (end < cur().size() && (cur()[end] == '-' || cur()[end] == '+'))
            ++end;
        while (end < cur().size() && std::isdigit(static_cast<unsigned char>(cur()[end])))
            ++end;
        const char* first = cur().data() + pos_;
        if (*first == '+')
            ++first;
        Int v = 0;
        auto [ptr, ec] = std::from_chars(first, cur().data() + end, v);
        if (ec == std::errc::result_out_of_range)
            fail(line, c, "integer does not fit in 64 bits");
        if (ec != std::errc() || ptr != cur().data() + end)
            fail(line, c, "expected an integer");
        pos_ = end;
        return v;
    }

    IntVector int_list()
    {
        IntVector out;
        ++pos_; // '['
        skip_blank_multiline();
        if (peek() == ']')
            fail(static_cast<int>(row_) + 1, col(), "empty list");
        for (;;) {
            skip_blank_multiline();
            out.push_back(integer_token());
            skip_blank_multiline();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                return out;
            }
            fail(static_cast<int>(row_) + 1, col(), "expected ',' or ']'");
        }
    }

    Value value()
    {
        Value v;
        v.line = static_cast<int>(row_) + 1;
        v.col = col();
        if (pos_ >= cur().size() || peek() == '#')
            fail(v.line, v.col, "missing value");
        const char c = peek();
        if (c == '"') {
            const auto close = cur().find('"', pos_ + 1);
            if (close == std::string::npos)
                fail(v.line, v.col, "unterminated string");
            v.kind = Value::Kind::String;
            v.text = cur().substr(pos_ + 1, close - pos_ - 1);
            pos_ = close + 1;
            return v;
        }
        if (c == '[') {
            std::size_t look = pos_ + 1;
            while (look < cur().size() && (cur()[look] == ' ' || cur()[look] == '\t'))
                ++look;
            // a nested bracket (possibly on the next line) means a matrix
            bool matrix = look < cur().size() && cur()[look] == '[';
            if (look >= cur().size() || cur()[look] == '#') {
                for (std::size_t r = row_ + 1; r < lines_.size(); ++r) {
                    const auto first = lines_[r].find_first_not_of(" \t");
                    if (first == std::string::npos || lines_[r][first] == '#')
                        continue;
                    matrix = lines_[r][first] == '[';
                    break;
                }
            }
            if (!matrix) {
                v.kind = Value::Kind::Vector;
                v.vec = int_list();
                return v;
            }
            v.kind = Value::Kind::Matrix;
            ++pos_;
            for (;;) {
                skip_blank_multiline();
                if (peek() != '[')
                    fail(static_cast<int>(row_) + 1, col(), "expected '[' starting a matrix row");
                v.rows.push_back(int_list());
                skip_blank_multiline();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (peek() == ']') {
                    ++pos_;
                    return v;
                }
                fail(static_cast<int>(row_) + 1, col(), "expected ',' or ']' in matrix");
            }
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            v.kind = Value::Kind::Integer;
            v.integer = integer_token();
            return v;
        }
        v.kind = Value::Kind::Word;
        while (pos_ < cur().size() && peek() != ' ' && peek() != '\t' && peek() != '#')
            v.text += cur()[pos_++];
        return v;
    }

    std::string file_;
    std::vector<std::string> lines_;
    std::size_t row_ = 0;
    std::size_t pos_ = 0;
};

class Fields {
public:
    Fields(const Section& s, const Lexer& lx) : s_(s), lx_(lx) {}

    bool has(const std::string& k) const { return s_.values.count(k) != 0; }

    const Value& get(const std::string& k) const
    {
        auto it = s_.values.find(k);
        if (it == s_.values.end())
            lx_.fail(s_.line, 1, "missing required key '" + k + "'");
        used_.insert(k);
        return it->second;
    }

    const Value& expect(const std::string& k, Value::Kind kind) const
    {
        const Value& v = get(k);
        if (v.kind != kind)
            lx_.fail(v.line, v.col, "key '" + k + "' expects " + kind_name(kind) + ", got " + kind_name(v.kind));
        return v;
    }

    Int integer(const std::string& k) const { return expect(k, Value::Kind::Integer).integer; }
    std::optional<Int> opt_integer(const std::string& k) const
    {
        if (!has(k))
            return std::nullopt;
        return integer(k);
    }
    IntVector vector(const std::string& k) const { return expect(k, Value::Kind::Vector).vec; }
    std::string text(const std::string& k) const
    {
        const Value& v = get(k);
        if (v.kind != Value::Kind::String && v.kind != Value::Kind::Word)
            lx_.fail(v.line, v.col, "key '" + k + "' expects a word or quoted string");
        return v.text;
    }

    void reject_unknown(const std::set<std::string>& allowed, const std::string& context) const
    {
        for (const auto& [k, v] : s_.values)
            if (!allowed.count(k))
                lx_.fail(v.line, v.key_col, "unknown key '" + k + "'" + context);
    }

    // location for a model error: the value of the most closely related key, else the header
    std::pair<int, int> locate(const std::vector<std::string>& keys) const
    {
        for (const auto& k : keys)
            if (auto it = s_.values.find(k); it != s_.values.end())
                return {it->second.line, it->second.col};
        return {s_.line, 1};
    }

private:
    const Section& s_;
    const Lexer& lx_;
    mutable std::set<std::string> used_;
};

std::vector<std::string> keys_for_invariant(const std::string& inv)
{
    static const std::map<std::string, std::vector<std::string>> table = {
        {"K value set", {"K"}},
        {"fiber divisibility", {"d", "K"}},
        {"twist", {"twist"}},
        {"quadric twist", {"twist"}},
        {"required fields", {"K"}},
        {"Euler characteristic", {"eY", "eX"}},
        {"relative K3", {"relK3"}},
        {"b3", {"eX", "c1rel"}},
        {"degree", {"degree"}},
        {"Wu relation", {"c1Y"}},
        {"Noether", {"c1Y", "eY"}},
        {"signature", {"gram"}},
        {"Miyaoka-Yau", {"c1Y"}},
        {"c1Y length", {"c1Y"}},
        {"c1E length", {"c1E"}},
        {"c1rel length", {"c1rel"}},
        {"nonempty discriminant", {"c1rel"}},
        {"u^3 integrality", {"c1rel"}},
        {"integrality", {"c2rel", "d"}},
    };
    auto it = table.find(inv);
    return it == table.end() ? std::vector<std::string>{} : it->second;
}

void alias_e(Section& s, const Lexer& lx)
{
    auto it = s.values.find("e");
    if (it == s.values.end())
        return;
    if (s.values.count("eX"))
        lx.fail(it->second.line, it->second.key_col, "both 'e' and 'eX' given");
    s.values.emplace("eX", it->second);
    s.values.erase(it);
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

std::string matrix_literal(const IntMatrix& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i)
            s += ", ";
        s += vector_to_string(m.row(i));
    }
    return s + "]";
}

} // namespace

MfsModel parse_mfs(std::string_view text, const std::string& file)
{
    Lexer lx(text, file);
    auto sections = lx.sections("mfs");
    if (sections.size() != 1)
        lx.fail(sections.empty() ? 1 : sections[1].line, 1,
                sections.empty() ? "no [mfs] section" : "more than one [mfs] section");
    Section& sec = sections.front();
    alias_e(sec, lx);
    Fields f(sec, lx);

    MfsModel m;
    if (f.has("name"))
        m.name = f.text("name");
    const Value& bd = f.expect("base_dim", Value::Kind::Integer);
    const Int dim = bd.integer;
    std::set<std::string> allowed{"name", "base_dim"};
    std::string ctx = " for base_dim " + std::to_string(dim);

    if (dim == 0) {
        allowed.insert({"degree", "eX"});
        f.reject_unknown(allowed, ctx);
        m.description = FanoRankOne{f.integer("degree"), f.integer("eX")};
    } else if (dim == 1) {
        allowed.insert({"K", "d", "relK3", "eX", "twist"});
        f.reject_unknown(allowed, ctx);
        DelPezzoFibration d;
        const Int K = f.integer("K");
        if (K < 0 || K > 1000)
            lx.fail(f.get("K").line, f.get("K").col, "K value set: K must lie in {1,...,6,8,9}");
        d.K = static_cast<int>(K);
        d.d = f.opt_integer("d").value_or(1);
        d.relK3 = f.opt_integer("relK3");
        d.eX = f.opt_integer("eX");
        d.twist = f.opt_integer("twist");
        m.description = d;
    } else if (dim == 2) {
        const std::string kind = f.text("kind");
        const bool smooth = kind == "smooth";
        if (!smooth && kind != "singular")
            lx.fail(f.get("kind").line, f.get("kind").col, "kind must be 'smooth' or 'singular'");
        allowed.insert({"kind", "gram", "c1Y", "eY"});
        if (smooth)
            allowed.insert({"c1E", "c2E"});
        else
            allowed.insert({"c1rel", "c2rel"});
        f.reject_unknown(allowed, ctx + ", kind " + kind);
        const Value& g = f.expect("gram", Value::Kind::Matrix);
        std::optional<BilinearLattice> L;
        try {
            L.emplace(IntMatrix::from_rows(g.rows));
        } catch (const std::exception& e) {
            lx.fail(g.line, g.col, std::string("gram: ") + e.what());
        }
        SurfaceData s{*L, f.vector("c1Y"), f.integer("eY")};
        if (smooth)
            m.description = SmoothConicBundle{s, f.vector("c1E"), f.integer("c2E")};
        else
            m.description = SingularConicBundle{s, f.vector("c1rel"), f.integer("c2rel")};
    } else {
        lx.fail(bd.line, bd.col, "base_dim must be 0, 1 or 2");
    }

    try {
        invariants(m.description);
    } catch (const ModelError& e) {
        const auto [line, col] = f.locate(keys_for_invariant(e.invariant()));
        lx.fail(line, col, e.what());
    } catch (const std::exception& e) {
        const auto [line, col] = f.locate({});
        lx.fail(line, col, e.what());
    }
    return m;
}

MfsModel load_mfs(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mfs(buf.str(), path);
}

std::string print_mfs(const MfsModel& m)
{
    std::ostringstream os;
    os << "[mfs]\n";
    if (!m.name.empty())
        os << "name = " << quote(m.name) << '\n';
    os << "base_dim = " << base_dimension(m.description) << '\n';
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FanoRankOne>) {
                os << "degree = " << d.degree << "\neX = " << d.eX << '\n';
            } else if constexpr (std::is_same_v<T, DelPezzoFibration>) {
                os << "K = " << d.K << '\n';
                if (d.d != 1)
                    os << "d = " << d.d << '\n';
                if (d.relK3)
                    os << "relK3 = " << *d.relK3 << '\n';
                if (d.eX)
                    os << "eX = " << *d.eX << '\n';
                if (d.twist)
                    os << "twist = " << *d.twist << '\n';
            } else {
                constexpr bool smooth = std::is_same_v<T, SmoothConicBundle>;
                os << "kind = " << (smooth ? "smooth" : "singular") << '\n';
                os << "gram = " << matrix_literal(d.surface.lattice.gram()) << '\n';
                os << "c1Y = " << vector_to_string(d.surface.c1Y) << '\n';
                os << "eY = " << d.surface.eY << '\n';
                if constexpr (smooth)
                    os << "c1E = " << vector_to_string(d.c1E) << "\nc2E = " << d.c2E << '\n';
                else
                    os << "c1rel = " << vector_to_string(d.c1rel) << "\nc2rel = " << d.c2rel << '\n';
            }
        },
        m.description);
    return os.str();
}

std::string print_record(const InvariantRecord& r)
{
    std::ostringstream os;
    os << "base_dim=" << r.base_dim << '\n';
    os << "kind=" << to_string(r.kind) << '\n';
    os << "b2=" << r.b2 << "\nb3=" << r.b3 << "\ne=" << r.e << "\nchi=" << r.chi << '\n';
    auto opt = [&](const char* k, const std::optional<Int>& v) {
        if (v)
            os << k << '=' << *v << '\n';
    };
    opt("K3", r.K3);
    opt("relK3", r.relK3);
    opt("K", r.K);
    opt("d", r.d);
    if (r.w2_type)
        os << "w2_type=" << to_string(*r.w2_type) << '\n';
    opt("cf_divisibility", r.cf_divisibility);
    opt("cf_norm", r.cf_norm);
    if (r.cf_type)
        os << "cf_type=" << to_string(*r.cf_type) << '\n';
    if (r.x3_mod3_zero)
        os << "x3_mod3=" << (*r.x3_mod3_zero ? "0" : "nonzero") << '\n';
    opt("degree", r.degree);
    return os.str();
}

InvariantRecord parse_record(std::string_view text, const std::string& file)
{
    std::string body(text);
    // the header is optional for records
    {
        const auto first = body.find_first_not_of(" \t\r\n");
        if (first == std::string::npos || body[first] != '[')
            body = "[record]\n" + body;
    }
    Lexer lx(body, file);
    auto sections = lx.sections("record");
    if (sections.size() != 1)
        lx.fail(1, 1, "expected exactly one record");
    const Section& sec = sections.front();
    Fields f(sec, lx);
    f.reject_unknown({"base_dim", "kind", "b2", "b3", "e", "chi", "K3", "relK3", "K", "d", "w2_type",
                      "cf_divisibility", "cf_norm", "cf_type", "x3_mod3", "degree"},
                     "");
    InvariantRecord r;
    r.base_dim = static_cast<int>(f.integer("base_dim"));
    {
        const Value& v = f.get("kind");
        auto k = parse_fibration_kind(v.text);
        if (v.kind != Value::Kind::Word || !k)
            lx.fail(v.line, v.col, "kind must be smooth, singular or n/a");
        r.kind = *k;
    }
    r.b2 = f.integer("b2");
    r.b3 = f.integer("b3");
    r.e = f.integer("e");
    r.chi = f.integer("chi");
    r.K3 = f.opt_integer("K3");
    r.relK3 = f.opt_integer("relK3");
    r.K = f.opt_integer("K");
    r.d = f.opt_integer("d");
    if (f.has("w2_type")) {
        const Value& v = f.get("w2_type");
        std::string t = v.kind == Value::Kind::Integer ? std::to_string(v.integer) : v.text;
        auto w = parse_w2_type(t);
        if (!w)
            lx.fail(v.line, v.col, "w2_type must be 0, I, II, III0 or III1");
        r.w2_type = *w;
    }
    r.cf_divisibility = f.opt_integer("cf_divisibility");
    r.cf_norm = f.opt_integer("cf_norm");
    if (f.has("cf_type")) {
        const Value& v = f.get("cf_type");
        if (v.text == "Characteristic")
            r.cf_type = VectorType::Characteristic;
        else if (v.text == "Ordinary")
            r.cf_type = VectorType::Ordinary;
        else
            lx.fail(v.line, v.col, "cf_type must be Characteristic or Ordinary");
    }
    if (f.has("x3_mod3")) {
        const Value& v = f.get("x3_mod3");
        if (v.kind == Value::Kind::Integer && v.integer == 0)
            r.x3_mod3_zero = true;
        else if (v.kind == Value::Kind::Word && v.text == "nonzero")
            r.x3_mod3_zero = false;
        else
            lx.fail(v.line, v.col, "x3_mod3 must be 0 or nonzero");
    }
    r.degree = f.opt_integer("degree");
    try {
        validate_record(r);
    } catch (const ModelError& e) {
        lx.fail(sec.line, 1, e.what());
    }
    return r;
}

} // namespace mori
