//! Baseline directions for center/peripheral camera pairs.

use std::f64::consts::{PI, TAU};

/// A peripheral-camera direction.
///
/// `baseline_angle` points from the center camera toward the peripheral
/// camera in image coordinates (x rightward, y downward, radians). When the
/// center view is warped into that peripheral view, pixels shift along
/// `displacement_angle = baseline_angle + pi` by their disparity: the camera
/// moves one way, image content apparently moves the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionSpec {
    baseline_angle: f64,
    displacement_angle: f64,
    // Unit vector of `baseline_angle`, kept explicitly so that `rot90` can
    // rotate it algebraically. Recomputing cos/sin of the rotated angle would
    // not commute bitwise with rotating the vector, and candidate selection
    // sits on a strict inequality where that last ulp decides.
    baseline_unit: (f64, f64),
}

/// Wraps an angle into [0, 2*pi).
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r == TAU {
        0.0
    } else {
        r
    }
}

/// Absolute angular difference wrapped into [0, pi].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

impl DirectionSpec {
    pub fn from_baseline(baseline_angle: f64) -> Self {
        let baseline_angle = normalize_angle(baseline_angle);
        Self {
            baseline_angle,
            displacement_angle: normalize_angle(baseline_angle + PI),
            baseline_unit: (baseline_angle.cos(), baseline_angle.sin()),
        }
    }

    pub fn from_baseline_degrees(deg: f64) -> Self {
        Self::from_baseline(deg.to_radians())
    }

    pub fn baseline_angle(&self) -> f64 {
        self.baseline_angle
    }

    pub fn displacement_angle(&self) -> f64 {
        self.displacement_angle
    }

    /// Unit vector pointing toward the peripheral camera.
    pub fn baseline_unit(&self) -> (f64, f64) {
        self.baseline_unit
    }

    /// Unit step along the displacement direction: the exact negation of
    /// the baseline unit, so opposite directions sample mirrored positions.
    pub fn displacement_unit(&self) -> (f64, f64) {
        (-self.baseline_unit.0, -self.baseline_unit.1)
    }

    /// Direction rotated by +90 degrees; pairs with grid `rot90`.
    ///
    /// The unit vector is rotated as `(x, y) -> (-y, x)` rather than rebuilt
    /// from the rotated angle, so rotating a direction and rotating the grid
    /// stay exactly consistent.
    pub fn rot90(&self) -> Self {
        let baseline_angle = normalize_angle(self.baseline_angle + PI / 2.0);
        Self {
            baseline_angle,
            displacement_angle: normalize_angle(baseline_angle + PI),
            baseline_unit: (-self.baseline_unit.1, self.baseline_unit.0),
        }
    }
}

/// The eight 45-degree directions of a 3x3 array around a center camera.
pub fn eight_directions() -> Vec<DirectionSpec> {
    (0..8)
        .map(|k| DirectionSpec::from_baseline_degrees(45.0 * k as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_normalized_and_opposed() {
        let d = DirectionSpec::from_baseline(-PI / 2.0);
        assert!((d.baseline_angle() - 3.0 * PI / 2.0).abs() < 1e-12);
        let gap = circular_distance(d.displacement_angle(), d.baseline_angle());
        assert!((gap - PI).abs() < 1e-12);
    }

    #[test]
    fn circular_distance_wraps_at_seam() {
        assert!((circular_distance(PI - 0.1, -PI + 0.1) - 0.2).abs() < 1e-12);
        assert!((circular_distance(0.0, PI) - PI).abs() < 1e-12);
        assert_eq!(circular_distance(1.0, 1.0), 0.0);
    }

    #[test]
    fn rot90_rotates_the_unit_vector_exactly() {
        for k in 0..8 {
            let d = DirectionSpec::from_baseline_degrees(45.0 * k as f64);
            let (bx, by) = d.baseline_unit();
            assert_eq!(d.rot90().baseline_unit(), (-by, bx));
            let (ux, uy) = d.displacement_unit();
            assert_eq!((ux, uy), (-bx, -by));
            let four: DirectionSpec = d.rot90().rot90().rot90().rot90();
            assert_eq!(four.baseline_unit(), d.baseline_unit());
        }
    }

    #[test]
    fn eight_directions_cover_the_array() {
        let dirs = eight_directions();
        assert_eq!(dirs.len(), 8);
        assert!((dirs[1].baseline_angle() - PI / 4.0).abs() < 1e-12);
        assert!((dirs[4].baseline_angle() - PI).abs() < 1e-12);
    }
}
