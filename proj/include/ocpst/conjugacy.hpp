#pragma once

#include <cstddef>
#include <vector>

#include "ocpst/group.hpp"

namespace ocpst {

/// Conjugacy classes of a GroupTable.
///
/// Class 0 is always {identity}; the remaining classes are ordered by their
/// smallest element.  Each class lists its elements in increasing order.
struct ConjugacyData {
    std::vector<std::vector<Element>> classes;
    std::vector<int> class_of;
    /// class_inv[j] is the class containing the inverses of class j.
    std::vector<int> class_inv;
    std::vector<Element> center;
    int exponent = 1;
    std::size_t group_order = 0;

    std::size_t class_count() const noexcept { return classes.size(); }
    std::size_t class_size(int j) const { return classes[static_cast<std::size_t>(j)].size(); }
    Element representative(int j) const { return classes[static_cast<std::size_t>(j)].front(); }
    bool is_central_class(int j) const { return class_size(j) == 1; }
    bool is_real_class(int j) const { return class_inv[static_cast<std::size_t>(j)] == j; }

    /// Permutation of class indices sending the class of g to the class of g^k.
    /// Depends only on k mod exponent.
    std::vector<int> class_power(long long k) const;

    std::vector<std::size_t> class_sizes() const;

    // Per-class cycle of classes of rep^0, rep^1, ..., rep^(ord-1).
    std::vector<std::size_t> power_offsets;
    std::vector<int> power_classes;
};

ConjugacyData conjugacy(const GroupTable& group);

} // namespace ocpst
