//! Membership of a point in the image `F(X)` by parameter homotopy from a
//! complete pseudo-witness set.

use alloc::vec::Vec;

use crate::degree::{PseudoWitnessSet, SliceHomotopy};
use crate::problem::Augmentation;
use crate::random;
use crate::slice::Slice;
use crate::tracker::{points_match, track_path, TrackStatus};
use crate::linalg::max_norm;
use crate::{par, Error, Result, Settings, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipResult {
    pub is_member: bool,
    /// Paths that failed; the answer is only as good as the survivors.
    pub failed_paths: usize,
    /// Paths ending at a singular point.
    pub singular_endpoints: usize,
    /// Smallest relative max-norm distance from an endpoint image to the
    /// query point (`None` if no path survived).
    pub closest_distance: Option<f64>,
}

/// Decides whether `y` lies on the image.
///
/// `y` is an affine point of the target space for an inhomogeneous map
/// (lifted to `(1, y)` on the cone) and a point of the cone itself for a
/// homogeneous one. The base slice is moved to a random slice `L_y`
/// through `y`; `y` is a member iff some tracked point lands on it.
pub fn is_on_image(
    pws: &PseudoWitnessSet,
    y: &[C64],
    tolerance: f64,
    seed: u64,
    settings: &Settings,
) -> Result<MembershipResult> {
    if !pws.is_complete() {
        return Err(Error::IncompleteWitness);
    }
    let cone = pws.cone();
    let expected = match cone.augmentation() {
        Augmentation::None => cone.ambient_dim(),
        Augmentation::Lambda => cone.ambient_dim() - 1,
    };
    if y.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: y.len(),
        });
    }
    let target = cone.lift_target(y);
    let mut rng = random::rng_from_seed(seed);
    let ly = Slice::through_point(pws.cone_dim(), &target, &mut rng);
    let far = ly.scaled(random::unit_complex(&mut rng));
    let h = SliceHomotopy::new(cone, pws.squaring(), pws.slice(), &far)?;
    let ends = par::map_indexed(pws.pairs().len(), |i| {
        track_path(&h, &pws.pairs()[i].source, &settings.track)
    });

    let mut result = MembershipResult {
        is_member: false,
        failed_paths: 0,
        singular_endpoints: 0,
        closest_distance: None,
    };
    for end in ends {
        match end.status {
            TrackStatus::Success => {}
            TrackStatus::SingularEndpoint => result.singular_endpoints += 1,
            _ => {
                result.failed_paths += 1;
                continue;
            }
        }
        let image = cone.map().evaluate(&end.coordinates)?;
        if !image.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            result.failed_paths += 1;
            continue;
        }
        let d = relative_distance(&image, &target);
        result.closest_distance = Some(result.closest_distance.map_or(d, |c: f64| c.min(d)));
        result.is_member |= points_match(&image, &target, tolerance);
    }
    Ok(result)
}

fn relative_distance(a: &[C64], b: &[C64]) -> f64 {
    let diff: Vec<C64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    let scale = max_norm(a).max(max_norm(b)).max(1.0);
    max_norm(&diff) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{numerical_image_degree, DegreeSettings};
    use crate::problem::{make_cone_map, ProblemSpec};
    use crate::sampler::{affine_image_sample, build_source_witness};
    use crate::POINT_MATCH_TOLERANCE;
    use alloc::string::ToString;

    #[test]
    fn parabola_membership() {
        let settings = Settings::default();
        let spec = ProblemSpec::parse(
            alloc::vec!["t".to_string()],
            &[] as &[&str],
            &["t", "t^2"],
            false,
        )
        .unwrap();
        let w = build_source_witness(&spec, 0, &settings).unwrap();
        let cone = make_cone_map(&spec).unwrap();
        let pws = numerical_image_degree(&spec, &w, &cone, 4, &settings, &DegreeSettings::default(), &mut |_| {})
            .unwrap();
        assert_eq!(pws.degree(), 2);
        let on = affine_image_sample(&spec, &w, 1, 8, &settings).unwrap().pop().unwrap();
        assert!(is_on_image(&pws, &on, POINT_MATCH_TOLERANCE, 1, &settings).unwrap().is_member);
        let off = [C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        assert!(!is_on_image(&pws, &off, POINT_MATCH_TOLERANCE, 1, &settings).unwrap().is_member);
        assert!(is_on_image(&pws, &off[..1], POINT_MATCH_TOLERANCE, 1, &settings).is_err());
        assert!(matches!(
            is_on_image(&pws.restricted(&[0]), &on, POINT_MATCH_TOLERANCE, 1, &settings),
            Err(Error::IncompleteWitness)
        ));
    }
}
