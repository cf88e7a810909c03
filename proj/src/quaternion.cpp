#include "qtz/quaternion.hpp"

#include <ostream>

namespace qtz {

std::ostream& operator<<(std::ostream& os, Quaternion q) {
    os << q.w;
    const auto part = [&os](double v, char unit) {
        os << (v < 0 ? " - " : " + ") << (v < 0 ? -v : v) << unit;
    };
    part(q.x, 'i');
    part(q.y, 'j');
    part(q.z, 'k');
    return os;
}

}  // namespace qtz
