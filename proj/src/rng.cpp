#include "rbmlab/rng.hpp"

#include <cstdlib>
#include <string>

namespace rbmlab {

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("RBM_LAB_WORKERS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
            throw std::invalid_argument("RBM_LAB_WORKERS must be a positive integer");
        }
        throw std::invalid_argument("RBM_LAB_WORKERS must be a positive integer");
    }
    return 1;
}

}  // namespace rbmlab
