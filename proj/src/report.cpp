#include "tsvf/report.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>

namespace tsvf {

std::string format_real(double v) {
    if (!std::isfinite(v)) return v > 0 ? "1e9999" : (v < 0 ? "-1e9999" : "null");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ReportValue ReportValue::boolean(bool v) {
    ReportValue r;
    r.kind_ = Kind::Boolean;
    r.bool_ = v;
    return r;
}

ReportValue ReportValue::integer(long long v) {
    ReportValue r;
    r.kind_ = Kind::Integer;
    r.int_ = v;
    return r;
}

ReportValue ReportValue::integer(std::uint64_t v) { return integer(static_cast<long long>(v)); }

ReportValue ReportValue::real(double v) {
    ReportValue r;
    r.kind_ = Kind::Real;
    r.real_ = v;
    return r;
}

ReportValue ReportValue::text(std::string v) {
    ReportValue r;
    r.kind_ = Kind::Text;
    r.text_ = std::move(v);
    return r;
}

ReportValue ReportValue::array() {
    ReportValue r;
    r.kind_ = Kind::Array;
    return r;
}

ReportValue ReportValue::object() {
    ReportValue r;
    r.kind_ = Kind::Object;
    return r;
}

void ReportValue::push(ReportValue v) {
    assert(kind_ == Kind::Array);
    items_.push_back(std::move(v));
}

void ReportValue::set(std::string key, ReportValue v) {
    assert(kind_ == Kind::Object);
    fields_.emplace_back(std::move(key), std::move(v));
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void append_indent(std::string& out, int indent) { out.append(static_cast<size_t>(indent) * 2, ' '); }

// CSV field: quoted only when the content requires it, quotes doubled.
void append_csv_field(std::string& out, const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        out += s;
        return;
    }
    out += '"';
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

void ReportValue::write_json(std::string& out, int indent) const {
    switch (kind_) {
    case Kind::Boolean:
        out += bool_ ? "true" : "false";
        break;
    case Kind::Integer:
        out += std::to_string(int_);
        break;
    case Kind::Real:
        out += format_real(real_);
        break;
    case Kind::Text:
        append_json_string(out, text_);
        break;
    case Kind::Array:
        if (items_.empty()) {
            out += "[]";
            break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            append_indent(out, indent + 1);
            items_[i].write_json(out, indent + 1);
            if (i + 1 < items_.size()) out += ',';
            out += '\n';
        }
        append_indent(out, indent);
        out += ']';
        break;
    case Kind::Object:
        if (fields_.empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
            append_indent(out, indent + 1);
            append_json_string(out, fields_[i].first);
            out += ": ";
            fields_[i].second.write_json(out, indent + 1);
            if (i + 1 < fields_.size()) out += ',';
            out += '\n';
        }
        append_indent(out, indent);
        out += '}';
        break;
    }
}

std::string ReportValue::to_json() const {
    std::string out;
    write_json(out, 0);
    out += '\n';
    return out;
}

void ReportValue::write_csv(std::string& out, const std::string& path) const {
    switch (kind_) {
    case Kind::Boolean:
        append_csv_field(out, path);
        out += ',';
        out += bool_ ? "true" : "false";
        out += '\n';
        break;
    case Kind::Integer:
        append_csv_field(out, path);
        out += ',';
        out += std::to_string(int_);
        out += '\n';
        break;
    case Kind::Real:
        append_csv_field(out, path);
        out += ',';
        out += format_real(real_);
        out += '\n';
        break;
    case Kind::Text:
        append_csv_field(out, path);
        out += ',';
        append_csv_field(out, text_);
        out += '\n';
        break;
    case Kind::Array:
        for (std::size_t i = 0; i < items_.size(); ++i) {
            items_[i].write_csv(out, path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
        }
        break;
    case Kind::Object:
        for (const auto& [key, value] : fields_) {
            value.write_csv(out, path.empty() ? key : path + "." + key);
        }
        break;
    }
}

std::string ReportValue::to_csv() const {
    std::string out = "key,value\n";
    write_csv(out, "");
    return out;
}

} // namespace tsvf
