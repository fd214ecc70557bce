//! Single codes (`s = 1`) against brute force: within half the minimum
//! distance there is exactly one codeword in the ball, and both decoders
//! must find it.

use igab::channel::{random_message, sample_rank_error, trial_rng};
use igab::codes::{rank_distance, InterleavedCode};
use igab::experiment::{run_oracle_check, OracleConfig};
use igab::ffield::Field;
use igab::interp::{decode, radius_unique, DecodeOutcome, Mode, DEFAULT_LIST_CAP};
use igab::linalg;
use igab::reference::{rr_fails, sb_fails};

#[test]
fn unique_region_lists_one_word() {
    for (m, k) in [(4, 2), (5, 1), (5, 3)] {
        let half = (m - k) / 2;
        let rep = run_oracle_check(&OracleConfig {
            q: 2,
            m,
            n: m,
            k: vec![k],
            trials: 60,
            seed: 11,
            ts: (0..=half).collect(),
            list_cap: DEFAULT_LIST_CAP,
        })
        .unwrap();
        assert_eq!(rep.mismatches, 0, "{:?}", rep.first_mismatch);
        assert_eq!(rep.list_sizes.keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(rep.contains_sent, 60);
    }
}

#[test]
fn unique_decoder_matches_nearest_codeword() {
    let f = Field::new(2, 5).unwrap();
    let code = InterleavedCode::new(&f, 5, &[2]).unwrap();
    let book: Vec<_> = (0..1024)
        .map(|i| {
            let m = code.message_at(i);
            let c = code.encode(&m).unwrap();
            (m, c)
        })
        .collect();
    let tau = radius_unique(&code);
    assert_eq!(tau, 1);
    for i in 0..150 {
        let mut rng = trial_rng(12, i);
        let msg = random_message(&code, &mut rng);
        let t = (i % 3) as usize;
        let e = sample_rank_error(&f, 1, 5, t, &mut rng).unwrap();
        let r = linalg::add(&f, &code.encode(&msg).unwrap(), &e);
        let mut near: Vec<_> = book
            .iter()
            .filter(|(_, c)| rank_distance(&f, c, &r).unwrap() <= tau)
            .map(|(m, _)| m.clone())
            .collect();
        let got = decode(&code, &r, Mode::Unique, DEFAULT_LIST_CAP).unwrap();
        if t <= tau {
            assert_eq!(near, vec![msg.clone()]);
            assert_eq!(got, DecodeOutcome::Unique(msg));
        } else if let DecodeOutcome::Unique(m) = got {
            // a miscorrection must still land inside the radius
            assert!(near.contains(&m));
        } else {
            near.retain(|m| *m == msg);
            assert!(near.is_empty());
        }
    }
}

#[test]
fn single_code_predicates_never_fire() {
    // one row leaves nothing to be rank deficient about below half the distance
    let f = Field::new(2, 7).unwrap();
    let code = InterleavedCode::new(&f, 7, &[3]).unwrap();
    for i in 0..200 {
        let mut rng = trial_rng(13, i);
        let msg = random_message(&code, &mut rng);
        let t = 1 + (i % 2) as usize;
        let e = sample_rank_error(&f, 1, 7, t, &mut rng).unwrap();
        let r = linalg::add(&f, &code.encode(&msg).unwrap(), &e);
        assert!(!sb_fails(&code, &r, t).unwrap());
        assert!(!rr_fails(&code, &r, t).unwrap());
    }
}
