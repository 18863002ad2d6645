#include <algorithm>

#include "psmkit/error.hpp"
#include "psmkit/kernels.hpp"

namespace psmkit::kernels::omp {

std::vector<Eigen::Vector3d> tip_positions(const KinematicChain& chain, std::span<const JointVector> configs) {
    // Limit violations throw, so check before entering the parallel region.
    for (const auto& q : configs) chain.check_limits(q);
    std::vector<Eigen::Vector3d> out(configs.size());
    const auto n = static_cast<std::ptrdiff_t>(configs.size());
    const std::size_t rows = chain.rows().size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& q = configs[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = (partial_product(chain, q, rows) * chain.tip_offset()).translation();
    }
    return out;
}

double realignment_spread(const KinematicChain& chain, const OffsetErrorVector& delta,
                          std::span<const JointVector> configs, int depth) {
    if (configs.empty()) return 0.0;
    // Everything that can throw is validated serially first.
    for (const auto& q : configs) (void)realignment_transform(chain, delta, q, depth);

    const auto n = static_cast<std::ptrdiff_t>(configs.size());
    std::vector<Eigen::Matrix4d> mats(configs.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        mats[static_cast<std::size_t>(i)] =
            realignment_transform(chain, delta, configs[static_cast<std::size_t>(i)], depth).matrix();

    double spread = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : spread)
    for (std::ptrdiff_t a = 0; a < n; ++a)
        for (std::ptrdiff_t b = a + 1; b < n; ++b)
            spread = std::max(spread, (mats[static_cast<std::size_t>(a)] - mats[static_cast<std::size_t>(b)]).norm());
    return spread;
}

RasterImage deinterlace(const RasterImage& image, Field field) {
    image.validate();
    if (image.height < 2) throw PreconditionError("deinterlacing needs at least two rows");
    RasterImage out(image.width, image.height);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < image.height; ++r) deinterlace_row(image, out, r, field);
    return out;
}

}  // namespace psmkit::kernels::omp
