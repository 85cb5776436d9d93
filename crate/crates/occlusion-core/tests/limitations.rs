//! Physical blind spots of center-view occlusion detection.
//!
//! Both detector and oracle reason only about content present in the center
//! disparity map. These tests pin down two cases where real occlusion exists
//! but is invisible from that map, so downstream users know the misses are
//! structural rather than bugs: an occluder cropped out of the field of
//! view, and an occluder hidden behind a nearer object.

use occlusion_core::detector::{detect, DetectorConfig};
use occlusion_core::direction::DirectionSpec;
use occlusion_core::disparity::DisparityMap;
use occlusion_core::oracle::{oracle_detect, OracleConfig};

/// Background map with one full-height vertical strip of constant disparity.
fn strip_map(width: usize, height: usize, fg: f32, x0: usize, x1: usize) -> DisparityMap {
    let mut values = vec![0.0f32; width * height];
    for y in 0..height {
        for x in x0..x1 {
            values[y * width + x] = fg;
        }
    }
    DisparityMap::new(width, height, values).unwrap()
}

/// Columns marked in every row of a mask, as a sorted list.
fn marked_columns(mask: &occlusion_core::mask::OcclusionMask) -> Vec<usize> {
    let cols: Vec<usize> = (0..mask.width())
        .filter(|&x| (0..mask.height()).all(|y| mask.get(x, y)))
        .collect();
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            assert_eq!(
                mask.get(x, y),
                cols.contains(&x),
                "mask is not constant down column {x}"
            );
        }
    }
    cols
}

/// An occluder that lies outside the cropped field of view still shadows
/// pixels inside it, and no method working from the cropped map can see
/// that. The full-width map proves the shadow is real; the cropped map
/// yields nothing.
#[test]
fn occluders_outside_the_field_of_view_are_missed() {
    let dir = DirectionSpec::from_baseline(0.0);

    // Wide world: a disparity-8 strip at x in [128, 144).
    let world = strip_map(160, 128, 8.0, 128, 144);
    let world_oracle = oracle_detect(&world, &dir, &OracleConfig::default());
    // Its shadow for this baseline falls at x in [120, 128): entirely within
    // the left 128 columns.
    assert_eq!(
        marked_columns(&world_oracle),
        (120..128).collect::<Vec<_>>()
    );
    let world_detect = detect(&world, &dir, &DetectorConfig::default()).unwrap();
    let detected = marked_columns(&world_detect);
    assert!(
        (120..128).all(|x| detected.contains(&x)),
        "full-view detector must cover the shadow band, got {detected:?}"
    );

    // Crop the world to the left 128 columns: the strip is gone and the map
    // is constant, so both methods are structurally blind to the shadow.
    let cropped = {
        let mut values = Vec::with_capacity(128 * 128);
        for y in 0..128 {
            values.extend_from_slice(&world.values()[y * 160..y * 160 + 128]);
        }
        DisparityMap::new(128, 128, values).unwrap()
    };
    let oracle = oracle_detect(&cropped, &dir, &OracleConfig::default());
    assert_eq!(oracle.count_occluded(), 0);
    let detector = detect(&cropped, &dir, &DetectorConfig::default()).unwrap();
    assert_eq!(detector.count_occluded(), 0);
}

/// A second object exactly behind a nearer one contributes nothing to the
/// center disparity map, so the shadow it casts in a peripheral view cannot
/// be recovered. Only the visible occluder's shadow is found.
#[test]
fn objects_hidden_in_the_center_view_cast_undetectable_shadows() {
    // Visible object A: disparity 16 at x in [60, 64). A hidden object B
    // with disparity 8 sits exactly behind it; the center view records only
    // A, so the map is identical with or without B.
    let center = strip_map(128, 128, 16.0, 60, 64);
    let dir = DirectionSpec::from_baseline(std::f64::consts::PI);

    // In the true two-layer scene, B would shadow x in [68, 72) for this
    // baseline (shifted by its disparity 8) on top of A's shadow at
    // x in [76, 80) (shifted by 16, clipped to A's width 4).
    let hidden_band: Vec<usize> = (68..72).collect();

    let oracle = oracle_detect(&center, &dir, &OracleConfig::default());
    assert_eq!(marked_columns(&oracle), (76..80).collect::<Vec<_>>());

    let detector = detect(&center, &dir, &DetectorConfig::default()).unwrap();
    let detected = marked_columns(&detector);
    assert_eq!(detected, (75..80).collect::<Vec<_>>());

    for x in hidden_band {
        assert!(
            !oracle.get(x, 0) && !detector.get(x, 0),
            "column {x} of the hidden object's shadow is unknowable from the \
             center map, yet it was marked"
        );
    }
}
