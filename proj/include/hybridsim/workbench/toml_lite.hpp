#pragma once

// Reader for the subset of TOML used by run configs: bare/quoted keys,
// [table] and [[array.of.tables]] headers (dotted names allowed), basic and
// literal strings, integers, floats, booleans, arrays (multi-line), and inline
// tables. Dates and multi-line strings are not supported.

#include "hybridsim/error.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hybridsim::toml {

class TomlError : public ConfigError {
public:
    TomlError(const std::string& what, int line, int column)
        : ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;

struct Value {
    std::variant<std::string, std::int64_t, double, bool, Array, Table> data;
    int line = 0;
    int column = 0;
    bool table_array = false; // Array built from [[header]] blocks

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_number() const { return is_integer() || is_float(); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_table() const { return std::holds_alternative<Table>(data); }

    const std::string& as_string() const { return std::get<std::string>(data); }
    std::int64_t as_integer() const { return std::get<std::int64_t>(data); }
    double as_number() const { return is_integer() ? static_cast<double>(as_integer()) : std::get<double>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const Array& as_array() const { return std::get<Array>(data); }
    Array& as_array() { return std::get<Array>(data); }
    const Table& as_table() const { return std::get<Table>(data); }
    Table& as_table() { return std::get<Table>(data); }

    std::string type_name() const {
        switch (data.index()) {
            case 0: return "string";
            case 1: return "integer";
            case 2: return "float";
            case 3: return "boolean";
            case 4: return "array";
            default: return "table";
        }
    }
};

inline const Value* find(const Table& t, std::string_view key) {
    for (const auto& [k, v] : t) {
        if (k == key) return &v;
    }
    return nullptr;
}

inline Value* find(Table& t, std::string_view key) {
    for (auto& [k, v] : t) {
        if (k == key) return &v;
    }
    return nullptr;
}

/// Inserts or replaces `key`.
inline void set(Table& t, const std::string& key, Value v) {
    if (auto* existing = find(t, key)) {
        *existing = std::move(v);
    } else {
        t.emplace_back(key, std::move(v));
    }
}

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Table parse_document() {
        Table root;
        Table* current = &root;
        while (true) {
            skip_ws_comments_newlines();
            if (eof()) break;
            if (peek() == '[') {
                current = parse_header(root);
            } else {
                parse_key_value(*current);
            }
            skip_ws();
            skip_comment();
            if (!eof() && peek() != '\n' && peek() != '\r') fail("expected end of line");
        }
        return root;
    }

    /// A single value spanning the whole input (used for CLI overrides).
    Value parse_standalone_value() {
        skip_ws();
        Value v = parse_value();
        skip_ws();
        if (!eof()) fail("trailing characters after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw TomlError(what, line_, col_); }

    bool eof() const { return pos_ >= s_.size(); }
    char peek(std::size_t off = 0) const { return pos_ + off < s_.size() ? s_[pos_ + off] : '\0'; }
    char get() {
        const char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) get();
    }
    void skip_comment() {
        if (!eof() && peek() == '#') {
            while (!eof() && peek() != '\n') get();
        }
    }
    void skip_ws_comments_newlines() {
        while (!eof()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                get();
            } else if (c == '#') {
                skip_comment();
            } else {
                break;
            }
        }
    }

    static bool is_bare_key_char(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    }

    std::string parse_simple_key() {
        if (peek() == '"') return parse_basic_string();
        if (peek() == '\'') return parse_literal_string();
        std::string key;
        while (!eof() && is_bare_key_char(peek())) key += get();
        if (key.empty()) fail("expected a key");
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts;
        parts.push_back(parse_simple_key());
        skip_ws();
        while (peek() == '.') {
            get();
            skip_ws();
            parts.push_back(parse_simple_key());
            skip_ws();
        }
        return parts;
    }

    Table& descend(Table& root, const std::vector<std::string>& path, std::size_t count, int line, int col) {
        Table* t = &root;
        for (std::size_t i = 0; i < count; ++i) {
            Value* v = find(*t, path[i]);
            if (!v) {
                Value nv;
                nv.data = Table{};
                nv.line = line;
                nv.column = col;
                t->emplace_back(path[i], std::move(nv));
                v = &t->back().second;
            }
            if (v->is_table()) {
                t = &v->as_table();
            } else if (v->is_array() && v->table_array && !v->as_array().empty()) {
                t = &v->as_array().back().as_table();
            } else {
                throw TomlError("key '" + path[i] + "' is not a table", line, col);
            }
        }
        return *t;
    }

    Table* parse_header(Table& root) {
        const int line = line_;
        const int col = col_;
        get(); // '['
        const bool array = peek() == '[';
        if (array) get();
        skip_ws();
        const auto path = parse_dotted_key();
        expect(']');
        if (array) expect(']');
        Table& parent = descend(root, path, path.size() - 1, line, col);
        const std::string& leaf = path.back();
        Value* v = find(parent, leaf);
        if (array) {
            if (!v) {
                Value nv;
                nv.data = Array{};
                nv.table_array = true;
                nv.line = line;
                nv.column = col;
                parent.emplace_back(leaf, std::move(nv));
                v = &parent.back().second;
            } else if (!v->is_array() || !v->table_array) {
                throw TomlError("key '" + leaf + "' already defined and is not an array of tables", line, col);
            }
            Value elem;
            elem.data = Table{};
            elem.line = line;
            elem.column = col;
            v->as_array().push_back(std::move(elem));
            return &v->as_array().back().as_table();
        }
        if (v) {
            if (!v->is_table()) throw TomlError("key '" + leaf + "' already defined", line, col);
            return &v->as_table();
        }
        Value nv;
        nv.data = Table{};
        nv.line = line;
        nv.column = col;
        parent.emplace_back(leaf, std::move(nv));
        return &parent.back().second.as_table();
    }

    void parse_key_value(Table& table) {
        const int line = line_;
        const int col = col_;
        const auto path = parse_dotted_key();
        skip_ws();
        expect('=');
        skip_ws();
        Value v = parse_value();
        Table& target = descend(table, path, path.size() - 1, line, col);
        if (find(target, path.back())) throw TomlError("duplicate key '" + path.back() + "'", line, col);
        target.emplace_back(path.back(), std::move(v));
    }

    Value parse_value() {
        Value v;
        v.line = line_;
        v.column = col_;
        if (eof()) fail("expected a value");
        const char c = peek();
        if (c == '"') {
            v.data = parse_basic_string();
        } else if (c == '\'') {
            v.data = parse_literal_string();
        } else if (c == '[') {
            v.data = parse_array();
        } else if (c == '{') {
            v.data = parse_inline_table();
        } else if (s_.substr(pos_, 4) == "true" && !is_bare_key_char(peek(4))) {
            for (int i = 0; i < 4; ++i) get();
            v.data = true;
        } else if (s_.substr(pos_, 5) == "false" && !is_bare_key_char(peek(5))) {
            for (int i = 0; i < 5; ++i) get();
            v.data = false;
        } else {
            parse_number(v);
        }
        return v;
    }

    std::string parse_basic_string() {
        expect('"');
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') fail("unterminated string");
            const char c = get();
            if (c == '"') break;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) fail("unterminated escape");
            const char e = get();
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case 'u':
                case 'U': append_codepoint(out, e == 'u' ? 4 : 8); break;
                default: fail(std::string("invalid escape '\\") + e + "'");
            }
        }
        return out;
    }

    void append_codepoint(std::string& out, int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (eof()) fail("truncated unicode escape");
            const char h = get();
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
            else fail("invalid hex digit in unicode escape");
        }
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    std::string parse_literal_string() {
        expect('\'');
        std::string out;
        while (true) {
            if (eof() || peek() == '\n') fail("unterminated string");
            const char c = get();
            if (c == '\'') break;
            out += c;
        }
        return out;
    }

    Array parse_array() {
        expect('[');
        Array out;
        while (true) {
            skip_ws_comments_newlines();
            if (peek() == ']') {
                get();
                break;
            }
            out.push_back(parse_value());
            skip_ws_comments_newlines();
            if (peek() == ',') {
                get();
                continue;
            }
            if (peek() == ']') {
                get();
                break;
            }
            fail("expected ',' or ']' in array");
        }
        return out;
    }

    Table parse_inline_table() {
        expect('{');
        Table out;
        skip_ws();
        if (peek() == '}') {
            get();
            return out;
        }
        while (true) {
            skip_ws();
            parse_key_value(out);
            skip_ws();
            if (peek() == ',') {
                get();
                continue;
            }
            expect('}');
            break;
        }
        return out;
    }

    void parse_number(Value& v) {
        std::string text;
        while (!eof()) {
            const char c = peek();
            if ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.' || c == 'e' || c == 'E' || c == '_') {
                if (c != '_') text += c;
                get();
            } else {
                break;
            }
        }
        if (text.empty()) fail("expected a value");
        const bool is_float = text.find_first_of(".eE") != std::string::npos;
        const char* b = text.data() + (text.front() == '+' ? 1 : 0);
        const char* e = text.data() + text.size();
        if (is_float) {
            double d = 0.0;
            auto r = std::from_chars(b, e, d);
            if (r.ec != std::errc{} || r.ptr != e) throw TomlError("malformed number '" + text + "'", v.line, v.column);
            v.data = d;
        } else {
            std::int64_t i = 0;
            auto r = std::from_chars(b, e, i);
            if (r.ec != std::errc{} || r.ptr != e) throw TomlError("malformed integer '" + text + "'", v.line, v.column);
            v.data = i;
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

inline Table parse(std::string_view text) { return detail::Parser(text).parse_document(); }

/// Parses a single TOML value ("30", "\"Be-9\"", "[1, 2]").
inline Value parse_value(std::string_view text) { return detail::Parser(text).parse_standalone_value(); }

} // namespace hybridsim::toml
