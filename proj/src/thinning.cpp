#include "wiregraph/thinning.hpp"

#include <array>

namespace wiregraph {

namespace {

// Neighbours P2..P9, clockwise starting north.
std::array<int, 8> neighbours(const BitMap& m, int x, int y)
{
    auto px = [&](int xx, int yy) -> int { return m.in_bounds(xx, yy) ? m.at(xx, yy) : 0; };
    return {px(x, y - 1), px(x + 1, y - 1), px(x + 1, y), px(x + 1, y + 1),
            px(x, y + 1), px(x - 1, y + 1), px(x - 1, y), px(x - 1, y - 1)};
}

bool sub_iteration(BitMap& m, int step)
{
    std::vector<std::size_t> remove;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y))
                continue;
            const auto p = neighbours(m, x, y);
            const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
            if (b < 2 || b > 6)
                continue;
            int a = 0;
            for (int i = 0; i < 8; ++i)
                a += (p[i] == 0 && p[(i + 1) % 8] == 1);
            if (a != 1)
                continue;
            // p[0]=P2 p[2]=P4 p[4]=P6 p[6]=P8
            const bool c1 = step == 0 ? (p[0] * p[2] * p[4]) == 0 : (p[0] * p[2] * p[6]) == 0;
            const bool c2 = step == 0 ? (p[2] * p[4] * p[6]) == 0 : (p[0] * p[4] * p[6]) == 0;
            if (c1 && c2)
                remove.push_back(m.index(x, y));
        }
    }
    for (auto idx : remove)
        m.pixels[idx] = 0;
    return !remove.empty();
}

}  // namespace

BitMap thin_zhang_suen(const BitMap& map)
{
    BitMap m = map;
    for (auto& v : m.pixels)
        v = v ? 1 : 0;
    bool changed = true;
    while (changed) {
        changed = sub_iteration(m, 0);
        changed = sub_iteration(m, 1) || changed;
    }
    return m;
}

}  // namespace wiregraph
