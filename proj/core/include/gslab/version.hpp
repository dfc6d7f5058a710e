#ifndef GSLAB_VERSION_HPP
#define GSLAB_VERSION_HPP

namespace gslab {

inline constexpr const char* version = "0.1.0";

} // namespace gslab

#endif
