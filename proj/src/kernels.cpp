#include "metldpc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace metldpc::kernels {

const Ops& active() {
    static const Ops* selected = [] {
        const char* force = std::getenv("METLDPC_SIMD");
        if (force != nullptr) {
            if (std::strcmp(force, "scalar") == 0) return &scalar_ops();
            if (std::strcmp(force, "avx2") == 0 && avx2_ops() != nullptr)
                return avx2_ops();
        }
        if (const Ops* avx2 = avx2_ops()) return avx2;
        return &scalar_ops();
    }();
    return *selected;
}

}  // namespace metldpc::kernels
