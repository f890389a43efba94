#ifndef BILGAMMA_IO_HPP
#define BILGAMMA_IO_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace bilgamma {

/// Locale-independent numeric formatting: 12 significant digits, '.' decimal
/// separator. Used for all CSV and report output so reruns are byte-stable.
inline std::string format_double(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

} // namespace bilgamma

#endif
