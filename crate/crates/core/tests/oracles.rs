use balanced_spectra::limits::{
    finite_n_truncated_word_moment, finite_n_word_moment, limit_word_moment, truncated_word_moment, Evaluator,
};
use balanced_spectra::{enumerate_pair_matched_words, is_symmetric, LinkKind};

/// High-accuracy limits of the k = 2 words: `8 - π²/3` for the two
/// symmetric words (both links), and a nested adaptive quadrature value for
/// the crossing Toeplitz word.
fn k2_reference(w: &str, kind: LinkKind) -> f64 {
    match (w, kind) {
        ("abab", LinkKind::T) => 1.420_263_732_606_309_4,
        ("abab", LinkKind::H) => 0.0,
        _ => 8.0 - std::f64::consts::PI.powi(2) / 3.0,
    }
}

#[test]
fn finite_n_approaches_limit() {
    for kind in [LinkKind::T, LinkKind::H] {
        for w in enumerate_pair_matched_words(2).unwrap() {
            let limit = k2_reference(&w.to_string(), kind);
            let gaps: Vec<f64> = [20, 40, 80]
                .iter()
                .map(|&n| (finite_n_word_moment(&w, kind, n).unwrap().value - limit).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{w} {kind}: {gaps:?}");
        }
    }
}

#[test]
fn quadrature_matches_reference_limits() {
    let q = Evaluator::quadrature();
    for kind in [LinkKind::T, LinkKind::H] {
        for w in enumerate_pair_matched_words(2).unwrap() {
            let want = k2_reference(&w.to_string(), kind);
            let got = limit_word_moment(&w, kind, &q).unwrap().value;
            assert!((got - want).abs() <= 0.005 * want.max(1.0), "{w} {kind}: {got} vs {want}");
        }
    }
}

#[test]
fn truncated_integral_matches_restricted_oracle() {
    let (n, eps) = (200, 0.2);
    let q = Evaluator::quadrature();
    for kind in [LinkKind::T, LinkKind::H] {
        for k in 1..=2 {
            for w in enumerate_pair_matched_words(k).unwrap() {
                if kind == LinkKind::H && !is_symmetric(&w) {
                    continue;
                }
                let integral = truncated_word_moment(&w, kind, eps, &q).unwrap().value;
                let oracle = finite_n_truncated_word_moment(&w, kind, n, eps).unwrap().value;
                let rel = (oracle - integral).abs() / integral;
                assert!(rel < 0.02, "{w} {kind}: oracle {oracle} vs integral {integral}");
            }
        }
    }
}

#[test]
fn hankel_nonsymmetric_words_decay() {
    for k in 1..=3 {
        for w in enumerate_pair_matched_words(k).unwrap().into_iter().filter(|w| !is_symmetric(w)) {
            let v30 = finite_n_word_moment(&w, LinkKind::H, 30).unwrap().value;
            let v60 = finite_n_word_moment(&w, LinkKind::H, 60).unwrap().value;
            assert!(v60 < v30, "{w}: {v30} -> {v60}");
        }
    }
}
