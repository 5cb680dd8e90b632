#include "ipf/likelihood.hpp"

#include <bit>

#include "ipf/error.hpp"

namespace ipf {

OverlapCounts overlap_counts(const BinaryImage& silhouette, const BinaryImage& synthetic) {
    if (silhouette.width() != synthetic.width() || silhouette.height() != synthetic.height())
        throw Error("overlap_counts: image dimensions differ");
    const auto& sw = silhouette.words();
    const auto& mw = synthetic.words();
    long common = 0, sil = 0, mdl = 0;
    for (std::size_t i = 0; i < sw.size(); ++i) {
        common += std::popcount(sw[i] & mw[i]);
        sil += std::popcount(sw[i]);
        mdl += std::popcount(mw[i]);
    }
    return {common, sil - common, mdl - common};
}

double weight(const OverlapCounts& counts) {
    const long denom = counts.n_silhouette_only + counts.n_model_only;
    if (denom == 0 && counts.n_common == 0)
        return 0.0; // two empty masks carry no evidence
    return static_cast<double>(counts.n_common) / static_cast<double>(std::max(1L, denom));
}

double multi_camera_weight(const std::vector<double>& per_camera_weights) {
    if (per_camera_weights.empty())
        throw Error("multi_camera_weight: empty camera list");
    double sum = 0.0;
    for (double w : per_camera_weights)
        sum += w;
    return sum / static_cast<double>(per_camera_weights.size());
}

SilhouetteWeight::SilhouetteWeight(const SkeletonSpec& spec, const std::vector<CameraModel>& cameras,
                                   const std::vector<BinaryImage>& silhouettes,
                                   const RigidTransform& origin)
    : spec_(spec), cameras_(cameras), silhouettes_(silhouettes), origin_(origin) {
    if (cameras.empty())
        throw Error("SilhouetteWeight: no cameras");
    if (cameras.size() != silhouettes.size())
        throw Error("SilhouetteWeight: camera and silhouette counts differ");
    for (std::size_t c = 0; c < cameras.size(); ++c)
        if (silhouettes[c].width() != cameras[c].width || silhouettes[c].height() != cameras[c].height)
            throw Error("SilhouetteWeight: silhouette dimensions do not match camera resolution");
}

double SilhouetteWeight::operator()(const PoseVector& pose) const {
    const auto joints = forward_kinematics(spec_, pose, origin_);
    const BodyVolume body = flesh(spec_, joints);
    std::vector<double> weights;
    weights.reserve(cameras_.size());
    for (std::size_t c = 0; c < cameras_.size(); ++c)
        weights.push_back(weight(overlap_counts(silhouettes_[c], rasterize(cameras_[c], body))));
    return multi_camera_weight(weights);
}

} // namespace ipf
