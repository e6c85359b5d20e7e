#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tsvf {

/// Report value tree. Not a general JSON library: object keys keep insertion
/// order and reals are always printed with %.17g, so a report built from the
/// same numbers is byte-identical run to run (the determinism contract of the
/// command line).
class ReportValue {
  public:
    enum class Kind { Boolean, Integer, Real, Text, Array, Object };

    static ReportValue boolean(bool v);
    static ReportValue integer(long long v);
    static ReportValue integer(std::uint64_t v);
    static ReportValue real(double v);
    static ReportValue text(std::string v);
    static ReportValue array();
    static ReportValue object();

    Kind kind() const { return kind_; }

    /// Array append / object insert; assert on kind misuse.
    void push(ReportValue v);
    void set(std::string key, ReportValue v);

    std::string to_json() const;      // pretty, two-space indent, trailing newline
    std::string to_csv() const;       // flattened to key,value rows

  private:
    ReportValue() = default;
    Kind kind_ = Kind::Object;
    bool bool_ = false;
    long long int_ = 0;
    double real_ = 0.0;
    std::string text_;
    std::vector<ReportValue> items_;
    std::vector<std::pair<std::string, ReportValue>> fields_;

    void write_json(std::string& out, int indent) const;
    void write_csv(std::string& out, const std::string& path) const;
};

/// Shortest-faithful %.17g rendering used everywhere a real is printed.
std::string format_real(double v);

} // namespace tsvf
