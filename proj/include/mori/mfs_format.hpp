#pragma once

#include "mori/mfs_model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace mori {

/// Error in a description file; what() reads "file:line:col: message".
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, int col, const std::string& message);
    const std::string& file() const { return file_; }
    int line() const { return line_; }
    int column() const { return col_; }
    const std::string& message() const { return message_; }

private:
    std::string file_;
    int line_;
    int col_;
    std::string message_;
};

/// Parses one `[mfs]` section; family invariants are checked too, so a
/// returned model always has computable invariants.
MfsModel parse_mfs(std::string_view text, const std::string& file = "<input>");
MfsModel load_mfs(const std::string& path);
std::string print_mfs(const MfsModel& m);

/// Records print as key=value lines; parse_record accepts an optional
/// `[record]` header.
std::string print_record(const InvariantRecord& r);
InvariantRecord parse_record(std::string_view text, const std::string& file = "<input>");

} // namespace mori
