use casimir_core::geometry::{Layer, LayerStack};
use casimir_core::materials::{MaterialModel, OscillatorTerm};
use casimir_core::scattering::{kappa, stack_reflection, transfer_matrix, Polarization, TransverseChannel};
use proptest::prelude::*;

fn material() -> impl Strategy<Value = MaterialModel> {
    prop_oneof![
        Just(MaterialModel::Vacuum),
        (1.0..15.0f64, 1.0..4.0f64).prop_map(|(e, m)| MaterialModel::constant(e, m).unwrap()),
        (1e29..1e33f64, 0.0..4e16f64, 1e11..1e15f64).prop_map(|(p, w, g)| {
            MaterialModel::drude_lorentz(vec![OscillatorTerm::new(p, w, g).unwrap()], Vec::new())
        }),
    ]
}

fn stack(max_layers: usize) -> impl Strategy<Value = LayerStack> {
    (
        prop::collection::vec((1e-9..300e-9f64, material()), 0..=max_layers),
        material(),
    )
        .prop_map(|(layers, term)| {
            let layers = layers
                .into_iter()
                .map(|(t, m)| Layer::new(t, m).unwrap())
                .collect();
            LayerStack::new(layers, term).unwrap()
        })
}

fn channel() -> impl Strategy<Value = TransverseChannel> {
    (11.0..17.0f64, 3.0..8.0f64)
        .prop_map(|(a, b)| TransverseChannel::new(10f64.powf(a), 10f64.powf(b)).unwrap())
}

proptest! {
    #[test]
    fn recursion_matches_transfer_matrix(gap in material(), s in stack(2), ch in channel()) {
        // The matrix oracle carries e^{Σκt}; stay well inside f64 range.
        let growth: f64 = s
            .layers()
            .iter()
            .map(|l| kappa(l.material(), ch).unwrap().value() * l.thickness())
            .sum();
        prop_assume!(growth < 200.0);
        for p in Polarization::BOTH {
            let r = stack_reflection(&gap, &s, ch, p).unwrap();
            let t = transfer_matrix::reflection(&gap, &s, ch, p).unwrap();
            prop_assert!(r.abs() <= 1.0);
            // When a small r results from cancelling O(1) echoes the matrix
            // product loses digits, hence the absolute floor.
            prop_assert!((r - t).abs() <= 1e-12 * t.abs() + 1e-15, "{} vs {}", r, t);
        }
    }

    #[test]
    fn mirror_backed_stacks_stay_bounded(gap in material(), s in stack(3), ch in channel()) {
        let backed = LayerStack::new(s.layers().to_vec(), MaterialModel::PerfectMirror).unwrap();
        for p in Polarization::BOTH {
            let r = stack_reflection(&gap, &backed, ch, p).unwrap();
            prop_assert!(r.abs() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn layer_of_gap_medium_is_transparent(gap in material(), t in 1e-9..1e-6f64, ch in channel()) {
        // A layer of the gap medium in front of a mirror only delays the echo.
        let s = LayerStack::new(vec![Layer::new(t, gap.clone()).unwrap()], MaterialModel::PerfectMirror).unwrap();
        let kappa = kappa(&gap, ch).unwrap().value();
        let e = (-2.0 * kappa * t).exp();
        prop_assert_eq!(stack_reflection(&gap, &s, ch, Polarization::TM).unwrap(), e);
        prop_assert_eq!(stack_reflection(&gap, &s, ch, Polarization::TE).unwrap(), -e);
    }
}
