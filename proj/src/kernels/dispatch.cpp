#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mulepatrol/kernels.hpp"

namespace mule::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "?";
}

namespace {

constexpr KernelTable kScalar{Isa::kScalar, &scalar::nearest_endpoints, &scalar::contact_windows};
constexpr KernelTable kAvx2{Isa::kAvx2, &avx2::nearest_endpoints, &avx2::contact_windows};
constexpr KernelTable kNeon{Isa::kNeon, &neon::nearest_endpoints, &neon::contact_windows};

const KernelTable& select_active() {
  if (const char* env = std::getenv("MULEPATROL_ISA"); env != nullptr && *env != '\0') {
    const std::string want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon})
      if (want == to_string(isa) && available(isa)) return table(isa);
  }
  if (available(Isa::kAvx2)) return kAvx2;
  if (available(Isa::kNeon)) return kNeon;
  return kScalar;
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(MULEPATROL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("kernel variant unavailable: " + std::string(to_string(isa)));
  switch (isa) {
    case Isa::kScalar: return kScalar;
    case Isa::kAvx2: return kAvx2;
    case Isa::kNeon: return kNeon;
  }
  return kScalar;
}

const KernelTable& active() {
  static const KernelTable& chosen = select_active();
  return chosen;
}

}  // namespace mule::kernels
