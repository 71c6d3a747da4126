//! Property tests for the map invariants.

use crossmap_core::bundles::HopfTarget;
use crossmap_core::crosses::{CrossKind, CrossSpace};
use crossmap_core::cube_gauss::{phi_rd, phi_rd_inv};
use crossmap_core::point::CubePoint;
use crossmap_core::radial::{ProfileKind, RadialProfile};
use crossmap_core::specfun::{erf, erf_inv};
use proptest::prelude::*;

fn interior() -> impl Strategy<Value = f64> {
    // Strictly interior cube coordinates, away from the representability
    // edge so round trips stay meaningful.
    (1e-6f64..1.0 - 1e-6).prop_map(|x| x)
}

proptest! {
    #[test]
    fn erf_round_trip(u in -0.999_999f64..0.999_999) {
        let t = erf_inv(u).unwrap();
        prop_assert!((erf(t) - u).abs() < 1e-12);
    }

    #[test]
    fn erf_is_monotone(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        if a < b {
            prop_assert!(erf(a) < erf(b));
        }
    }

    #[test]
    fn cube_gaussian_round_trip(coords in prop::collection::vec(interior(), 1..6)) {
        let x = CubePoint::new(coords).unwrap();
        let back = phi_rd_inv(&phi_rd(&x).unwrap()).unwrap();
        for (a, b) in back.coords().iter().zip(x.coords()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn cube_gaussian_is_odd(coords in prop::collection::vec(interior(), 1..6)) {
        let mirrored = CubePoint::new(coords.iter().map(|c| 1.0 - c).collect()).unwrap();
        let x = CubePoint::new(coords).unwrap();
        let y = phi_rd(&x).unwrap();
        let ym = phi_rd(&mirrored).unwrap();
        for (a, b) in y.coords().iter().zip(ym.coords()) {
            prop_assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_map_round_trip(coords in prop::collection::vec(interior(), 3)) {
        let sphere = CrossSpace::new(CrossKind::Sphere(3)).unwrap();
        let x = CubePoint::new(coords).unwrap();
        let p = sphere.phi(&x).unwrap();
        let norm: f64 = p.ambient().iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let back = sphere.phi_inv(&p).unwrap();
        for (a, b) in back.coords().iter().zip(x.coords()) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn radial_transport_round_trip(coords in prop::collection::vec(-4.0f64..4.0, 4)) {
        let profile = RadialProfile::new(ProfileKind::QuatProj(1)).unwrap();
        let y = crossmap_core::point::EuclideanPoint::new(coords).unwrap();
        let v = profile.varphi(&y).unwrap();
        prop_assert!(v.norm() < profile.radius());
        let back = profile.varphi_inv(&v).unwrap();
        for (a, b) in back.coords().iter().zip(y.coords()) {
            prop_assert!((a - b).abs() < 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn hopf_norm_and_projection(coords in prop::collection::vec(interior(), 3)) {
        let hopf = HopfTarget::new(1).unwrap();
        let x = CubePoint::new(coords.clone()).unwrap();
        let p = hopf.phi(&x).unwrap();
        let norm: f64 = p.ambient().iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let projected = crossmap_core::bundles::hopf_project(&p).unwrap();
        let base = hopf.complex_proj().phi(&CubePoint::new(coords[..2].to_vec()).unwrap()).unwrap();
        for (a, b) in projected.ambient().iter().zip(base.ambient()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
