#ifndef FANOCHAIN_VERSION_HPP
#define FANOCHAIN_VERSION_HPP

namespace fanochain {

inline constexpr const char* kVersion = "1.0.0";

} // namespace fanochain

#endif
