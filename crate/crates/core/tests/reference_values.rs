#![allow(clippy::excessive_precision)]

use plate_flow_core::analytic::{evaluate, FieldKind};
use plate_flow_core::params::{validate, ValidatedParams};
use plate_flow_core::specfun::{erfc, exp_erfc};
use plate_flow_core::sweep::figure_preset;

/// `(x, erfc(x))` at 50 points on [-6, 26.5].
const ERFC: [(f64, f64); 50] = include!("fixtures/erfc.rs");

/// `(figure, varied value, Y, U, theta, C)` from an arbitrary-precision
/// evaluation of the same closed form.
const CLOSED_FORM: [(u32, f64, f64, f64, f64, f64); 78] = [
    (1, 2.0, 0.3, 0.7517852558422788, 0.6829182196300195, 0.6950110868769696),
    (1, 2.0, 1.0, 0.6421597534808414, 0.2123194360474604, 0.26851428848513403),
    (1, 2.0, 2.5, 0.03416807027256379, 0.007849800466560168, 0.01656648690377967),
    (1, 10.0, 0.3, 0.6150571622879407, 0.416642055201643, 0.6950110868769696),
    (1, 10.0, 1.0, 0.4773870556253888, 0.04471125861919084, 0.26851428848513403),
    (1, 10.0, 2.5, 0.0248145238736971, 0.00033508245005730566, 0.01656648690377967),
    (2, 0.2, 0.3, 0.9274840604142104, 0.6165966053721438, 0.7062600823404209),
    (2, 0.2, 1.0, 0.4867591461232693, 0.13204703240306595, 0.21551784536197377),
    (2, 0.2, 2.5, 0.0025646524803970686, 0.0005342417935450198, 0.0021258304142971083),
    (2, 10.0, 0.3, 0.7149342827064166, 0.6165966053721438, 0.47366168045584855),
    (2, 10.0, 1.0, 0.3124184441161946, 0.13204703240306595, 0.07472338874943064),
    (2, 10.0, 2.5, 0.001046879470238329, 0.0005342417935450198, 0.0004105053849047042),
    (3, 5.0, 0.3, 0.5342761076195482, 1.177430399282988, 0.593881786419657),
    (3, 5.0, 1.0, 0.2096983666872223, 0.14822099774238348, 0.13971026244329013),
    (3, 5.0, 2.5, 0.0007118870249670935, 0.0003796518379548084, 0.0011160257841565295),
    (3, 9.0, 0.3, 0.7438153833191085, 2.288580324068223, 0.593881786419657),
    (3, 9.0, 1.0, 0.24530792483150665, 0.2208831011652177, 0.13971026244329013),
    (3, 9.0, 2.5, 0.0007350409011369886, 0.000431856122001366, 0.0011160257841565295),
    (4, 0.2, 0.3, 0.3991676844476055, 0.5436094575102817, 0.593881786419657),
    (4, 0.2, 1.0, 0.18117032092196356, 0.0954021878975649, 0.13971026244329013),
    (4, 0.2, 2.5, 0.0006886060547428303, 0.00032901420055292326, 0.0011160257841565295),
    (4, 0.6, 0.3, 0.9032273489048792, 0.6116421100739459, 0.6261975867966443),
    (4, 0.6, 1.0, 0.80142113263941, 0.1456042367015583, 0.20661644599236045),
    (4, 0.6, 2.5, 0.08869748219537137, 0.005771122008028446, 0.015618727650400044),
    (5, 5.0, 0.3, 0.7007002895579796, 0.5850349737792335, 0.6950110868769696),
    (5, 5.0, 1.0, 0.5751409176859855, 0.13370490631747353, 0.26851428848513403),
    (5, 5.0, 2.5, 0.029783596989233576, 0.0033803261728257445, 0.01656648690377967),
    (5, 15.0, 0.3, 1.25012039733592, 0.5850349737792335, 0.6950110868769696),
    (5, 15.0, 1.0, 1.016623978669723, 0.13370490631747353, 0.26851428848513403),
    (5, 15.0, 2.5, 0.04657367389572644, 0.0033803261728257445, 0.01656648690377967),
    (6, 5.0, 0.3, 0.7007002895579796, 0.5850349737792335, 0.6950110868769696),
    (6, 5.0, 1.0, 0.5751409176859855, 0.13370490631747353, 0.26851428848513403),
    (6, 5.0, 2.5, 0.029783596989233576, 0.0033803261728257445, 0.01656648690377967),
    (6, 15.0, 0.3, 1.4006164057835788, 0.5850349737792335, 0.6950110868769696),
    (6, 15.0, 1.0, 1.2631597789924986, 0.13370490631747353, 0.26851428848513403),
    (6, 15.0, 2.5, 0.07248782491356293, 0.0033803261728257445, 0.01656648690377967),
    (7, 0.16, 0.3, 0.7189362426453273, 0.6829182196300195, 0.8308374948484665),
    (7, 0.16, 1.0, 0.8389083287666481, 0.2123194360474604, 0.527011529133648),
    (7, 0.16, 2.5, 0.2081263513274864, 0.007849800466560168, 0.17107489281305108),
    (7, 0.6, 0.3, 0.5563082437383171, 0.6829182196300195, 0.6950110868769696),
    (7, 0.6, 1.0, 0.4695035337088066, 0.2123194360474604, 0.26851428848513403),
    (7, 0.6, 2.5, 0.026500363230617805, 0.007849800466560168, 0.01656648690377967),
    (8, 0.17, 0.3, 1.262397221413408, 0.5930092404420545, 0.5802485129213358),
    (8, 0.17, 1.0, 1.086441090727203, 0.14536744481645802, 0.15089044082831196),
    (8, 0.17, 2.5, 0.08338726938446081, 0.007144104536611216, 0.003856746883328984),
    (8, 0.71, 0.3, 1.1767597704278951, 0.5850349737792335, 0.5802485129213358),
    (8, 0.71, 1.0, 0.9024867542511609, 0.13370490631747353, 0.15089044082831196),
    (8, 0.71, 2.5, 0.033643472397656686, 0.0033803261728257445, 0.003856746883328984),
    (9, 5.0, 0.3, 0.9860554221935156, 0.4147689431682439, 0.7827154621192753),
    (9, 5.0, 1.0, 0.793049568908502, 0.009758676325403644, 0.43715969710789393),
    (9, 5.0, 2.5, 0.15614599912439556, 3.0358561805960283e-10, 0.11483009387254171),
    (9, 11.62, 0.3, 0.8042318006884996, 0.24234030638257087, 0.7827154621192753),
    (9, 11.62, 1.0, 0.700854842356141, 0.00012333839747287635, 0.43715969710789393),
    (9, 11.62, 2.5, 0.15538662640057369, 1.4046442976064057e-21, 0.11483009387254171),
    (10, 0.2, 0.3, 0.5098271965443049, 0.9523642005956885, 0.6483562793479796),
    (10, 0.2, 1.0, 0.22771734616009776, 0.1673364808465788, 0.17487076853432532),
    (10, 0.2, 2.5, 0.0009006709600792749, 0.0005776672041125174, 0.00156506107016627),
    (10, 0.8, 0.3, 3.3306786794845924, 5.9900354283932415, 0.7145815572525529),
    (10, 0.8, 1.0, 2.9080237059408995, 1.4406293511283452, 0.318796570653629),
    (10, 0.8, 2.5, 0.4017694411686024, 0.06496836108417715, 0.04587642228914817),
    (11, 3.0, 0.3, 1.1566920761371717, 3.284666041153933, 0.7089833101432411),
    (11, 3.0, 1.0, 1.0076858077585593, 0.783468246907819, 0.30351981779625115),
    (11, 3.0, 2.5, 0.11521604169562344, 0.031158724476494235, 0.03377333431565004),
    (11, 7.0, 0.3, 4.046774867636109, 30.201790938992744, 0.7089833101432411),
    (11, 7.0, 1.0, 2.3461854650502874, 4.752429872047214, 0.30351981779625115),
    (11, 7.0, 2.5, 0.1507281693294877, 0.08684381545202892, 0.03377333431565004),
    (12, 0.16, 0.3, 0.728607554648625, 0.7562133111113413, 0.8308374948484665),
    (12, 0.16, 1.0, 0.8444304203668317, 0.22720910494065513, 0.527011529133648),
    (12, 0.16, 2.5, 0.20823573293635517, 0.008078226570378119, 0.17107489281305108),
    (12, 0.6, 0.3, 0.5659795557416148, 0.7562133111113413, 0.6950110868769696),
    (12, 0.6, 1.0, 0.47502562530899023, 0.22720910494065513, 0.26851428848513403),
    (12, 0.6, 2.5, 0.026609744839486582, 0.008078226570378119, 0.01656648690377967),
    (13, 0.2, 0.3, 0.3991676844476055, 0.5436094575102817, 0.593881786419657),
    (13, 0.2, 1.0, 0.18117032092196356, 0.0954021878975649, 0.13971026244329013),
    (13, 0.2, 2.5, 0.0006886060547428303, 0.00032901420055292326, 0.0011160257841565295),
    (13, 0.6, 0.3, 0.9032273489048792, 0.6116421100739459, 0.6261975867966443),
    (13, 0.6, 1.0, 0.80142113263941, 0.1456042367015583, 0.20661644599236045),
    (13, 0.6, 2.5, 0.08869748219537137, 0.005771122008028446, 0.015618727650400044),
];

#[test]
fn erfc_matches_reference_values() {
    let mut worst = 0.0f64;
    for (x, want) in ERFC {
        let got = erfc(x).unwrap();
        let rel = ((got - want) / want).abs();
        assert!(rel <= 1e-13, "erfc({x}) = {got:e}, want {want:e} (rel {rel:e})");
        worst = worst.max(rel);
    }
    assert!(worst < 1e-13);
}

#[test]
fn exp_erfc_survives_where_the_product_does_not() {
    let (p, q) = (900.0, 30.0);
    assert!((libm::exp(p) * libm::erfc(q)).is_nan());
    let got = exp_erfc(p, q).unwrap();
    let want = 0.018795888861416751;
    assert!(got.is_finite());
    assert!(((got - want) / want).abs() <= 1e-11, "{got}");
}

/// Velocity is a sum of pole terms of size up to `|amp| e^{pole t}` that
/// cancel to O(1), so its tolerance scales with that sum.
fn velocity_scale(p: &ValidatedParams, t: f64) -> f64 {
    let d = p.derived();
    let f = p.params();
    let term = |amp: f64, pole: f64| amp.abs() * libm::exp(pole.max(0.0) * t);
    1.0 + term(d.amp_mass, d.mass_pole) + term(d.amp_wall_pole, f.temp_rate) + term(d.amp_thermal_pole, d.thermal_pole)
}

#[test]
fn closed_form_matches_reference_table() {
    for (id, value, y, u, theta, c) in CLOSED_FORM {
        let spec = figure_preset(id).unwrap();
        let (fp, t) = spec.varied.apply(&spec.base, spec.t, value);
        let p = validate(&fp).unwrap();
        for (kind, want, tol) in [
            (FieldKind::Velocity, u, 1e-15 * velocity_scale(&p, t)),
            (FieldKind::Temperature, theta, 1e-13 * theta.abs()),
            (FieldKind::Concentration, c, 1e-13 * c.abs()),
        ] {
            let got = evaluate(kind, y, t, &p).unwrap();
            assert!(
                (got - want).abs() <= tol,
                "figure {id}, {}={value}, {kind} at Y={y}: {got:e} vs {want:e}",
                spec.varied
            );
        }
    }
}
