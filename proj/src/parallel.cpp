#include "cornerforge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cornerforge {

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CORNERFORGE_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace cornerforge
