#include "fbmsde/kernels.hpp"

#include <cstdlib>
#include <optional>

#include "fbmsde/errors.hpp"

namespace fbmsde::kernels {
namespace {

std::optional<Backend>& forced() {
  static std::optional<Backend> value;
  return value;
}

Backend resolve_default() {
  if (const char* env = std::getenv("FBMSDE_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") {
      if (!avx2_supported())
        throw DomainError("FBMSDE_SIMD=avx2 but the CPU does not support AVX2");
      return Backend::avx2;
    }
    if (!v.empty() && v != "auto")
      throw DomainError("FBMSDE_SIMD must be one of: scalar, avx2, auto");
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

} // namespace

Backend active_backend() {
  if (forced()) return *forced();
  static const Backend detected = resolve_default();
  return detected;
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    throw DomainError("cannot force AVX2 kernels: unsupported CPU");
  forced() = b;
}

void reset_backend() { forced().reset(); }

const KernelTable& active() {
  return active_backend() == Backend::avx2 ? avx2_table() : scalar_table();
}

} // namespace fbmsde::kernels
