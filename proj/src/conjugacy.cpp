#include "ocpst/conjugacy.hpp"

#include <algorithm>
#include <numeric>

namespace ocpst {

std::vector<int> ConjugacyData::class_power(long long k) const {
    std::vector<int> perm(classes.size());
    for (std::size_t j = 0; j < classes.size(); ++j) {
        const auto begin = power_offsets[j];
        const auto len = static_cast<long long>(power_offsets[j + 1] - begin);
        long long r = k % len;
        if (r < 0) r += len;
        perm[j] = power_classes[begin + static_cast<std::size_t>(r)];
    }
    return perm;
}

std::vector<std::size_t> ConjugacyData::class_sizes() const {
    std::vector<std::size_t> sizes(classes.size());
    for (std::size_t j = 0; j < classes.size(); ++j) sizes[j] = classes[j].size();
    return sizes;
}

ConjugacyData conjugacy(const GroupTable& group) {
    const std::size_t n = group.order();
    ConjugacyData data;
    data.group_order = n;
    data.class_of.assign(n, -1);

    std::vector<char> seen(n);
    auto orbit = [&](Element g) {
        std::fill(seen.begin(), seen.end(), 0);
        std::vector<Element> cls;
        for (std::size_t h = 0; h < n; ++h) {
            Element c = group.conjugate(g, static_cast<Element>(h));
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                cls.push_back(c);
            }
        }
        std::sort(cls.begin(), cls.end());
        return cls;
    };

    data.classes.push_back({group.identity()});
    data.class_of[static_cast<std::size_t>(group.identity())] = 0;
    for (std::size_t g = 0; g < n; ++g) {
        if (data.class_of[g] != -1) continue;
        auto cls = orbit(static_cast<Element>(g));
        const int idx = static_cast<int>(data.classes.size());
        for (Element x : cls) data.class_of[static_cast<std::size_t>(x)] = idx;
        data.classes.push_back(std::move(cls));
    }

    data.class_inv.resize(data.classes.size());
    for (std::size_t j = 0; j < data.classes.size(); ++j) {
        data.class_inv[j] = data.class_of[static_cast<std::size_t>(group.inv(data.classes[j].front()))];
        if (data.classes[j].size() == 1) data.center.push_back(data.classes[j].front());
    }
    std::sort(data.center.begin(), data.center.end());

    long long exponent = 1;
    data.power_offsets.push_back(0);
    for (const auto& cls : data.classes) {
        const Element rep = cls.front();
        Element x = group.identity();
        long long ord = 0;
        do {
            data.power_classes.push_back(data.class_of[static_cast<std::size_t>(x)]);
            x = group.mul(x, rep);
            ++ord;
        } while (x != group.identity());
        data.power_offsets.push_back(data.power_classes.size());
        exponent = std::lcm(exponent, ord);
    }
    data.exponent = static_cast<int>(exponent);
    return data;
}

} // namespace ocpst
