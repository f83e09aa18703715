#ifndef TSINFO_VERSION_HPP
#define TSINFO_VERSION_HPP

namespace tsinfo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tsinfo

#endif  // TSINFO_VERSION_HPP
