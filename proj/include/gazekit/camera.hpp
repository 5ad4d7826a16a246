#pragma once

#include <stdexcept>

namespace gazekit {

/// Scene-camera geometry. Resolution comes from the corpus header, not the
/// recording hardware, so it is a plain field here.
struct CameraModel {
    int width_px = 0;
    int height_px = 0;
    double hfov_deg = 0.0;
    double vfov_deg = 0.0;
    double fps = 0.0;

    double px_per_deg_h() const { return width_px / hfov_deg; }

    void validate() const {
        if (width_px <= 0 || height_px <= 0)
            throw std::invalid_argument("camera: resolution must be positive");
        if (hfov_deg <= 0.0 || vfov_deg <= 0.0)
            throw std::invalid_argument("camera: field of view must be positive");
        if (fps <= 0.0)
            throw std::invalid_argument("camera: fps must be positive");
    }
};

} // namespace gazekit
