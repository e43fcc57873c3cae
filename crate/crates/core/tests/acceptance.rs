//! Acceptance suite: one PASS/FAIL line per criterion with its time limit.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hermite_core::algebra::parse::parse_ring_elem;
use hermite_core::algebra::presentation::{named_presentations, ring_a, ring_r};
use hermite_core::algebra::{Field, FieldElem, RingElem, StandardHoms};
use hermite_core::exec::ExecMode;
use hermite_core::matgroup::{build_m, build_m0, psi_m_factorization, Mat};
use hermite_core::mennicke::run_lemma21_chain;
use hermite_core::patching::{freeness_witness, h_extension_checks, lift_certificate, square_check};
use hermite_core::sample::{DEFAULT_DEGREE, DEFAULT_SEED};
use hermite_core::steinberg::{check_lemma_z_commutators, commutator_residual, z_word_perturbed, zbar_word};
use hermite_core::verify::{oracle_agreement_for, run, Config, Status};
use hermite_core::witt::{
    anisotropic_check, distinguished_space, knebusch_hypotheses, lemma47_isometry, norm_group_membership,
    norm_group_oracle, rho_zbar_distinctness, verify_pfister_relations,
};

type Check = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, what: impl Into<String>) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn f2u() -> (Field, FieldElem) {
    (Field::Rational, Field::Rational.generator())
}

fn gf4() -> (Field, FieldElem) {
    (Field::gf4(), Field::gf4().generator())
}

fn six_factor_identity() -> Check {
    for (k, u) in [f2u(), gf4()] {
        let homs = e(StandardHoms::new(k))?;
        let cert = e(psi_m_factorization(&homs, &u))?;
        let psi_m = e(e(build_m(&u))?.map(&homs.psi))?;
        ensure(cert.len() == 6 && cert.target() == &psi_m, format!("product differs from psi(M) over {k}"))?;
    }
    Ok(())
}

fn m0_in_sl2() -> Check {
    for (_, u) in [f2u(), gf4()] {
        let m0 = e(build_m0(&u))?;
        ensure(m0.det().is_one(), format!("det M0 = {}", m0.det()))?;
        ensure(e(m0.is_symplectic())?, "M0^T chi M0 != chi")?;
    }
    Ok(())
}

fn commutator_words() -> Check {
    for (_, u) in [f2u(), gf4()] {
        let (ok, residual) = e(check_lemma_z_commutators(&u))?;
        ensure(ok, format!("residual {residual}"))?;
        let mutated = e(commutator_residual(&e(z_word_perturbed(&u))?, &u))?;
        ensure(!mutated.is_empty(), "mutation not detected")?;
    }
    Ok(())
}

fn zeta_computation() -> Check {
    for (k, u) in [f2u(), gf4()] {
        let homs = e(StandardHoms::new(k))?;
        let image = e(e(zbar_word(&homs, &u))?.map(&homs.zeta))?;
        ensure(image.is_empty(), format!("zeta(zbar) = {image}"))?;
        let reduced = e(e(e(build_m(&u))?.map(&homs.psi))?.map(&homs.pi_a))?;
        ensure(reduced.is_identity(), format!("psi(M) mod m^2 = {reduced}"))?;
    }
    Ok(())
}

fn chain_certificate() -> Check {
    let (k, u) = f2u();
    for u in [u.clone(), &u + &k.one()] {
        let chain = e(run_lemma21_chain(&u))?;
        e(chain.certificate.verify())?;
        let m0 = e(build_m0(&u))?;
        let expected = e(m0.block_sum(&Mat::identity(m0.presentation(), 1)))?;
        ensure(chain.certificate.target() == &expected, "target is not diag(M0,1)")?;
    }
    let r = ring_r(k);
    let lhs = e(parse_ring_elem(&r, "1+(1+u)*a^2+(1+u)*(1+a^2)"))?;
    ensure(lhs == RingElem::constant(&r, u.clone()), format!("identity gives {lhs}"))?;
    let typo = e(parse_ring_elem(&r, "(1+u)*a^2+(1+u)*(1+a^2)"))?;
    ensure(!typo.is_one(), "uncorrected reading unexpectedly holds")?;
    let config = Config {
        degree: 8,
        ..Config::default()
    };
    let report = e(run("lemma-2.1-chain", &config))?;
    ensure(report.all_passed(), "registry check failed at D = 8")
}

fn pfister_isometry() -> Check {
    let (k, u) = f2u();
    for u in [u, k.one()] {
        let iso = e(lemma47_isometry(&u))?;
        let det = iso.matrix().det();
        ensure(det.constant_term().is_one(), format!("basis det {det} is not 1 mod m"))?;
    }
    Ok(())
}

fn pfister_relations() -> Check {
    let r = e(verify_pfister_relations(Field::Rational, 20, DEFAULT_SEED, ExecMode::Parallel))?;
    ensure(
        [r.checked_a, r.checked_b, r.checked_c, r.checked_e] == [20; 4],
        format!("{r:?}"),
    )?;
    ensure(r.sample_e_lambdas.len() == 2, "missing (e) witness")
}

fn norm_groups() -> Check {
    let (k, u) = f2u();
    let a = ring_a(k);
    let us = RingElem::var(&a, "s").scale(&u);
    let plain = e(distinguished_space(k, &k.one(), &k.one()))?;
    let twisted = e(distinguished_space(k, &u, &e(u.inv())?))?;
    ensure(!e(norm_group_membership(&plain, &us))?.member, "us in A(s,t)")?;
    ensure(e(norm_group_membership(&twisted, &us))?.member, "us not in A(us,u^-1 t)")?;

    let (k4, w) = gf4();
    let o1 = e(norm_group_oracle(&e(distinguished_space(k4, &k4.one(), &k4.one()))?, ExecMode::Parallel))?;
    let o2 = e(norm_group_oracle(&e(distinguished_space(k4, &w, &(&w * &w)))?, ExecMode::Parallel))?;
    ensure(o1 == o2, "GF(4) oracle sets differ")?;

    for field in [Field::gf2(), Field::gf4(), Field::gf8()] {
        let (ok, witness) = e(oracle_agreement_for(field, 10, DEFAULT_SEED, ExecMode::Parallel))?;
        ensure(ok, witness.to_string())?;
    }
    Ok(())
}

fn knebusch() -> Check {
    let (k, u) = f2u();
    ensure(e(knebusch_hypotheses(&ring_a(k), &u))?, "hypotheses")?;
    for (l, m) in [(k.one(), k.one()), (u.clone(), e(u.inv())?)] {
        let sp = e(distinguished_space(k, &l, &m))?;
        ensure(sp.gram().det().is_one(), format!("det {}", sp.gram().det()))?;
        let (ok, expansion) = e(anisotropic_check(&sp))?;
        ensure(ok, expansion)?;
    }
    Ok(())
}

fn distinctness() -> Check {
    let (k, u) = f2u();
    let d = e(rho_zbar_distinctness(&u))?;
    ensure(d.distinct && d.witness.as_deref() == Some("u*s"), format!("{d:?}"))?;
    let sq = &(&k.one() + &u) * &(&k.one() + &u);
    ensure(!e(rho_zbar_distinctness(&sq))?.distinct, "square u reported distinct")?;
    for modulus in [0b111, 0b1011, 0b10011] {
        let f = e(Field::gf2n(modulus))?;
        let d = e(rho_zbar_distinctness(&f.generator()))?;
        ensure(!d.distinct && d.note.contains("is a square"), format!("{f}: {d:?}"))?;
    }
    Ok(())
}

fn milnor_patching() -> Check {
    let (k, u) = f2u();
    let homs = e(StandardHoms::new(k))?;
    ensure(e(square_check(&homs))?, "square does not commute")?;
    let report = e(run("milnor-square", &Config::default()))?;
    ensure(report.checks[0].status == Status::Pass, report.checks[0].witness.to_string())?;
    let chain = e(run_lemma21_chain(&u))?;
    let lift = e(lift_certificate(&homs, &chain.certificate))?;
    ensure(e(lift.matrix.map(&homs.pi_r))? == *chain.certificate.target(), "pi(E) != diag(M0,1)")?;
    let w = e(freeness_witness(&homs, &lift, chain.certificate.target()))?;
    ensure(e(w.e.try_mul(&w.e_inv))?.is_identity(), "E E^-1 != I3")?;
    for triple in &w.basis {
        ensure(triple.len() == 3, "basis vector is not a triple")?;
        for p in triple {
            ensure(e(homs.pi_r.apply(&p.f))? == e(homs.pi_r.apply(&p.g))?, format!("({}, {})", p.f, p.g))?;
        }
    }
    ensure(e(h_extension_checks(&homs))?, "h checks")
}

fn substrate() -> Check {
    for field in [Field::Rational, Field::gf4()] {
        for p in named_presentations(field) {
            e(p.check_confluence())?;
        }
    }
    common::ring_axiom_sweep(Field::Rational, 1000, DEFAULT_DEGREE, DEFAULT_SEED)?;
    common::hom_sweep(Field::Rational, 1000, DEFAULT_DEGREE, DEFAULT_SEED)?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("six-factor identity", 1, six_factor_identity),
        ("M0 in SL2 and Sp2", 1, m0_in_sl2),
        ("z as three commutators", 1, commutator_words),
        ("zeta kills zbar", 1, zeta_computation),
        ("Mennicke chain certificate", 5, chain_certificate),
        ("Pfister isometry via v1..v4", 1, pfister_isometry),
        ("Pfister relations (a)(b)(c)(e)", 10, pfister_relations),
        ("norm-group separation and oracle", 60, norm_groups),
        ("Knebusch hypotheses", 1, knebusch),
        ("distinctness pipeline", 5, distinctness),
        ("Milnor patching", 10, milnor_patching),
        ("algebra substrate properties", 30, substrate),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let verdict = if result.is_ok() && in_time { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2} {name:<34} ({:.3} s, limit {limit} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
        if let Err(msg) = &result {
            println!("    {msg}");
        } else if !in_time {
            println!("    over the time limit");
        }
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
