#include <algorithm>

#include "psmkit/error.hpp"
#include "psmkit/kernels.hpp"

namespace psmkit::kernels {

void deinterlace_row(const RasterImage& in, RasterImage& out, int row, Field field) {
    const int kept_parity = field == Field::Even ? 0 : 1;
    const auto width = static_cast<std::size_t>(in.width);
    const auto src = [&](int r) { return in.pixels.begin() + static_cast<std::ptrdiff_t>(r * width); };
    auto dst = out.pixels.begin() + static_cast<std::ptrdiff_t>(row * width);

    if (row % 2 == kept_parity) {
        std::copy_n(src(row), width, dst);
        return;
    }
    const bool has_above = row - 1 >= 0;
    const bool has_below = row + 1 < in.height;
    if (has_above && has_below) {
        auto above = src(row - 1), below = src(row + 1);
        for (std::size_t c = 0; c < width; ++c)
            dst[static_cast<std::ptrdiff_t>(c)] =
                static_cast<std::uint8_t>((above[static_cast<std::ptrdiff_t>(c)] + below[static_cast<std::ptrdiff_t>(c)] + 1) / 2);
    } else {
        std::copy_n(src(has_above ? row - 1 : row + 1), width, dst);
    }
}

namespace serial {

std::vector<Eigen::Vector3d> tip_positions(const KinematicChain& chain, std::span<const JointVector> configs) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(configs.size());
    for (const auto& q : configs) out.push_back(tip_pose(chain, q).translation());
    return out;
}

double realignment_spread(const KinematicChain& chain, const OffsetErrorVector& delta,
                          std::span<const JointVector> configs, int depth) {
    std::vector<Eigen::Matrix4d> mats;
    mats.reserve(configs.size());
    for (const auto& q : configs) mats.push_back(realignment_transform(chain, delta, q, depth).matrix());
    double spread = 0.0;
    for (std::size_t a = 0; a < mats.size(); ++a)
        for (std::size_t b = a + 1; b < mats.size(); ++b) spread = std::max(spread, (mats[a] - mats[b]).norm());
    return spread;
}

RasterImage deinterlace(const RasterImage& image, Field field) {
    image.validate();
    if (image.height < 2) throw PreconditionError("deinterlacing needs at least two rows");
    RasterImage out(image.width, image.height);
    for (int r = 0; r < image.height; ++r) deinterlace_row(image, out, r, field);
    return out;
}

}  // namespace serial
}  // namespace psmkit::kernels
