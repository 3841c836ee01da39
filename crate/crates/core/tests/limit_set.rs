use qfs_core::config::{parse_config, GENUS2_EXAMPLE};
use qfs_core::limit_set::{count_reduced_words, for_each_reduced_word, limit_set};
use qfs_core::surface::{twist_flow, Surface};
use qfs_core::{ProjectivePoint, C64};

const DEPTH: usize = 6;

fn representation(bend: C64) -> qfs_core::surface::Representation {
    let config = parse_config(GENUS2_EXAMPLE).unwrap();
    let surface = Surface::new(config.graph().unwrap()).unwrap();
    surface.holonomy(&twist_flow(&config.fn_, 0, bend)).unwrap()
}

#[test]
fn word_enumeration_matches_count() {
    let rep = representation(C64::new(0.0, 0.0));
    let mut per_len = vec![0u64; DEPTH + 1];
    let mut previous: Option<usize> = None;
    for_each_reduced_word(rep.images(), DEPTH, |w, _| {
        assert!(previous.is_none_or(|p| p <= w.len()));
        previous = Some(w.len());
        per_len[w.len()] += 1;
    });
    for n in 1..=DEPTH {
        assert_eq!(per_len[n], count_reduced_words(4, n));
    }
}

#[test]
fn cloud_is_invariant_under_short_words() {
    for bend in [C64::new(0.0, 0.0), C64::new(0.0, 0.2)] {
        let rep = representation(bend);
        let cloud = limit_set(&rep, DEPTH);
        let contains = cloud.lookup(1e-8);
        let mut checked = 0;
        for (p, &n) in cloud.points.iter().zip(&cloud.word_lengths) {
            if n + 2 > DEPTH {
                continue;
            }
            for g in rep.images() {
                for m in [*g, g.inverse()] {
                    let Some(q) = m.apply(ProjectivePoint::from_complex(*p)).to_complex() else { continue };
                    assert!(contains(q), "image {q} of {p} missing (bend {bend})");
                    checked += 1;
                }
            }
        }
        assert!(checked > 100, "{checked}");
    }
}

#[test]
fn points_are_separated() {
    let cloud = limit_set(&representation(C64::new(0.0, 0.2)), 4);
    let p = &cloud.points;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            assert!((p[i] - p[j]).norm() > 1e-10);
        }
    }
    assert!(cloud.word_lengths.windows(2).all(|w| w[0] <= w[1]));
}
