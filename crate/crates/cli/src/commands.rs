use std::fmt::Write as _;

use serde_json::{json, Value};
use subgroup_height::certificate::agree;
use subgroup_height::intlinalg::{int_matrix, lll_reduce_with_transform};
use subgroup_height::json::{
    certificate_json, element_from_json, exact_matrix_from_json, group_from_json, int_matrix_from_json,
    int_vector_json, real_json, sunit_from_json, system_from_json,
};
use subgroup_height::{
    build_presentation, certify_thm2, clear_denominators, dependency_module, element_log_table, group_height as
    subgroup_height_of, mcmullen_volume, minkowski_check, monte_carlo_zonotope, siegel_basis,
    small_independent_generators, successive_minima, sunit_height, thm4_reduce, weil_height, zonoid_volume,
    BigInt, BigRational, Certificate, Error, GroupElement, IntMatrix, PrecisionContext, Real, Result, SUnitContext,
    SimpleSystem, ZonotopeSpec,
};

use crate::Target;

/// Output of one command in both formats.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, passed: true }
    }
}

fn mid(x: &Real, ctx: &PrecisionContext) -> String {
    x.to_interval(ctx.bits).mid_decimal(20)
}

fn enclosure(x: &Real, ctx: &PrecisionContext) -> String {
    let iv = x.to_interval(ctx.bits);
    format!("[{}, {}]", iv.lower_decimal(30), iv.upper_decimal(30))
}

fn vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn matrix_json(m: &IntMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": (0..m.rows()).map(|r| int_vector_json(m.row(r))).collect::<Vec<_>>(),
    })
}

fn columns_text(m: &IntMatrix) -> String {
    m.to_cols().iter().map(|c| vector(c)).collect::<Vec<_>>().join(" ")
}

fn generators(v: &Value, clear: bool) -> Result<(Vec<GroupElement>, Option<BigInt>)> {
    let gens = group_from_json(v)?;
    if clear {
        let (g, l) = clear_denominators(&gens)?;
        Ok((g, Some(l)))
    } else {
        Ok((gens, None))
    }
}

/// A simple system, or the system of a group's log matrix.
fn system(v: &Value, ctx: &PrecisionContext) -> Result<SimpleSystem> {
    if v.is_array() || v.get("generators").is_some() {
        build_presentation(&group_from_json(v)?, ctx)?.system(ctx)
    } else {
        system_from_json(v, ctx)
    }
}

pub fn height(v: &Value, ctx: &PrecisionContext) -> Result<Report> {
    let e = element_from_json(v)?;
    let h = weil_height(&e, ctx)?;
    let table: Vec<Value> = element_log_table(&e, ctx)
        .iter()
        .map(|entry| {
            json!({
                "place": entry.place.label(),
                "mass": entry.mass.value().to_string(),
                "log_norm": real_json(&entry.value, ctx.bits),
            })
        })
        .collect();
    let mut text = format!("{}\n", mid(&h, ctx));
    writeln!(text, "  enclosure {}", enclosure(&h, ctx)).unwrap();
    if let Real::Exact(p) = &h {
        writeln!(text, "  exact {p}").unwrap();
    }
    Ok(Report::ok(
        json!({"element": e.to_string(), "height": real_json(&h, ctx.bits), "log_table": table}),
        text,
    ))
}

pub fn group_height(v: &Value, ctx: &PrecisionContext) -> Result<Report> {
    let gens = group_from_json(v)?;
    let p = build_presentation(&gens, ctx)?;
    let h = subgroup_height_of(&p, ctx)?;
    let places: Vec<&str> = p.places().iter().map(|x| x.label()).collect();
    let text = format!(
        "{}\n  enclosure {}\n  rank {}, places {}\n",
        mid(&h, ctx),
        enclosure(&h, ctx),
        p.rank(),
        places.join(" ")
    );
    Ok(Report::ok(
        json!({"rank": p.rank(), "places": places, "height": real_json(&h, ctx.bits)}),
        text,
    ))
}

pub fn deps(v: &Value, clear: bool, ctx: &PrecisionContext) -> Result<Report> {
    let (gens, scale) = generators(v, clear)?;
    let module = dependency_module(&gens)?;
    let basis = siegel_basis(&module.a, ctx)?;
    let mut text = String::new();
    if let Some(l) = &scale {
        writeln!(text, "generators raised to the power {l}").unwrap();
    }
    writeln!(text, "rank {} of {} generators", module.rank(), gens.len()).unwrap();
    writeln!(text, "kernel basis {}", columns_text(&module.kernel)).unwrap();
    let vs: Vec<String> = basis.vectors.iter().map(|z| vector(z)).collect();
    writeln!(text, "small basis {}", vs.join(" ")).unwrap();
    writeln!(
        text,
        "{} prod |z|_inf = {} <= sqrt({})/{} = {} ({}{})",
        basis.verdict,
        basis.product,
        basis.gram,
        basis.minor_gcd,
        mid(&basis.bound, ctx),
        basis.verdict.label(),
        if basis.exhaustive { "" } else { ", not exhaustive" }
    )
    .unwrap();
    let json = json!({
        "denominator_scaling": scale.map(|l| l.to_string()),
        "rank": module.rank(),
        "primes": module.primes,
        "basis_exponents": matrix_json(&module.basis),
        "coordinates": matrix_json(&module.a),
        "kernel": matrix_json(&module.kernel),
        "small_basis": basis.vectors.iter().map(|z| int_vector_json(z)).collect::<Vec<_>>(),
        "sup_norms": basis.sup_norms.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "product": basis.product.to_string(),
        "gram_det": basis.gram.to_string(),
        "minor_gcd": basis.minor_gcd.to_string(),
        "bound": real_json(&basis.bound, ctx.bits),
        "exhaustive": basis.exhaustive,
        "status": basis.verdict.to_string(),
    });
    Ok(Report { json, text, passed: basis.verdict.passed() })
}

pub fn reduce(v: &Value) -> Result<Report> {
    let b = int_matrix_from_json(v)?;
    let (reduced, t) = lll_reduce_with_transform(&b)?;
    let text = format!("reduced {}\ntransform {}\n", columns_text(&reduced), columns_text(&t));
    Ok(Report::ok(json!({"reduced": matrix_json(&reduced), "transform": matrix_json(&t)}), text))
}

pub fn minima(v: &Value, ctx: &PrecisionContext) -> Result<Report> {
    let s = system(v, ctx)?;
    let r = successive_minima(&s, ctx)?;
    let mut text = String::new();
    for (b, mu) in r.vectors.iter().zip(&r.norms) {
        writeln!(text, "{} {}", mid(mu, ctx), vector(b)).unwrap();
    }
    writeln!(text, "index {}{}", r.index, if r.exhaustive { "" } else { " (not exhaustive)" }).unwrap();
    let json = json!({
        "vectors": r.vectors.iter().map(|b| int_vector_json(b)).collect::<Vec<_>>(),
        "norms": r.norms.iter().map(|x| real_json(x, ctx.bits)).collect::<Vec<_>>(),
        "index": r.index.to_string(),
        "exhaustive": r.exhaustive,
    });
    Ok(Report::ok(json, text))
}

pub fn zonotope_volume(v: &Value, mc: Option<(u64, u64)>, ctx: &PrecisionContext) -> Result<Report> {
    let (zonotope, zonoid) = if v.get("coeffs").is_some() {
        let s = system_from_json(v, ctx)?;
        (ZonotopeSpec::new(s.weighted())?, Some(zonoid_volume(&s, ctx)?))
    } else {
        (ZonotopeSpec::new(exact_matrix_from_json(v)?)?, None)
    };
    let vol = mcmullen_volume(&zonotope, ctx)?;
    let mut text = format!("{}\n", mid(&vol, ctx));
    let mut json = json!({"volume": real_json(&vol, ctx.bits)});
    if let Some(z) = &zonoid {
        writeln!(text, "  zonoid formula {}", mid(z, ctx)).unwrap();
        json["zonoid_volume"] = real_json(z, ctx.bits);
    }
    if let Some((samples, seed)) = mc {
        let e = monte_carlo_zonotope(&zonotope.segments_f64(), samples, seed)?;
        writeln!(text, "  monte carlo {:.6} +- {:.6} ({} samples, seed {})", e.mean, e.half_width, samples, seed).unwrap();
        json["monte_carlo"] = json!({
            "mean": format!("{:.12}", e.mean),
            "sigma": format!("{:.12}", e.sigma),
            "half_width": format!("{:.12}", e.half_width),
            "samples": samples,
            "seed": seed,
        });
    }
    Ok(Report::ok(json, text))
}

fn certificates(certs: &[&Certificate], extra: Value, mut text: String) -> Report {
    for c in certs {
        text.push_str(&c.to_string());
    }
    let mut json = extra;
    json["certificates"] = Value::Array(certs.iter().map(|c| certificate_json(c)).collect());
    let passed = certs.iter().all(|c| c.passed());
    json["status"] = Value::String(if passed { "PASS" } else { "FAIL" }.into());
    Report { json, text, passed }
}

fn need(v: Option<&Value>) -> Result<&Value> {
    v.ok_or_else(|| Error::InvalidInput("this target needs an input".into()))
}

pub fn certify(
    target: Target,
    v: Option<&Value>,
    primes: &[u64],
    clear: bool,
    ctx: &PrecisionContext,
) -> Result<Report> {
    match target {
        Target::Thm1 => {
            let p = build_presentation(&group_from_json(need(v)?)?, ctx)?;
            let c = small_independent_generators(&p, ctx)?;
            let extra = json!({
                "h_group": real_json(&c.h_group, ctx.bits),
                "betas": c.betas.iter().map(|b| int_vector_json(b)).collect::<Vec<_>>(),
                "beta_heights": c.beta_heights.iter().map(|h| real_json(h, ctx.bits)).collect::<Vec<_>>(),
                "index": c.index.to_string(),
            });
            Ok(certificates(&[&c.certificate], extra, String::new()))
        }
        Target::Thm2 => {
            let (gens, scale) = generators(need(v)?, clear)?;
            let c = certify_thm2(&gens, ctx)?;
            let mut text = String::new();
            if let Some(l) = &scale {
                writeln!(text, "generators raised to the power {l}").unwrap();
            }
            let extra = json!({
                "denominator_scaling": scale.map(|l| l.to_string()),
                "z": c.dependencies.vectors.iter().map(|z| int_vector_json(z)).collect::<Vec<_>>(),
                "prod_z": c.dependencies.product.to_string(),
                "siegel_status": c.dependencies.verdict.to_string(),
                "h_group": real_json(&c.h_group, ctx.bits),
                "q_integral": real_json(&c.q.tuple_sum, ctx.bits),
                "q_product_form": real_json(&c.q.product_form, ctx.bits),
            });
            let mut r = certificates(&[&c.thm2, &c.thm5], extra, text);
            r.passed &= c.dependencies.verdict.passed();
            Ok(r)
        }
        Target::Thm3 => {
            let s = system(need(v)?, ctx)?;
            let z = zonoid_volume(&s, ctx)?;
            let m = mcmullen_volume(&ZonotopeSpec::new(s.weighted())?, ctx)?;
            let passed = agree(&z, &m, ctx.bits);
            let status = if passed { "PASS" } else { "FAIL" };
            let text = format!(
                "{status} zonoid volume: (2^N/N!) int |Delta| = {} ; McMullen = {}\n",
                mid(&z, ctx),
                mid(&m, ctx)
            );
            let json = json!({
                "status": status,
                "zonoid_volume": real_json(&z, ctx.bits),
                "mcmullen_volume": real_json(&m, ctx.bits),
            });
            Ok(Report { json, text, passed })
        }
        Target::Thm4 => {
            let s = system(need(v)?, ctx)?;
            let (_, cert) = thm4_reduce(&s, ctx)?;
            let mut certs = vec![cert];
            if s.n_funcs() <= 3 {
                certs.extend(minkowski_check(&s, ctx)?.certificates);
            }
            let refs: Vec<&Certificate> = certs.iter().collect();
            Ok(certificates(&refs, json!({}), String::new()))
        }
        Target::Cor2 => {
            let c = if primes.is_empty() {
                sunit_from_json(need(v)?)?
            } else {
                SUnitContext::rational(primes)?
            };
            let r = sunit_height(&c, ctx)?;
            let text = format!(
                "PASS S-unit height: s!·Reg/(2d)^(s-1) = {} ; subgroup height = {}\n  regulator {}\n",
                mid(&r.height, ctx),
                mid(&r.group_height, ctx),
                mid(&r.regulator, ctx)
            );
            let json = json!({
                "status": "PASS",
                "height": real_json(&r.height, ctx.bits),
                "regulator": real_json(&r.regulator, ctx.bits),
                "group_height": real_json(&r.group_height, ctx.bits),
            });
            Ok(Report::ok(json, text))
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn log(n: i64) -> Real {
    Real::log(&q(n, 1)).expect("positive")
}

fn ints(v: &[i64]) -> Vec<GroupElement> {
    v.iter().map(|&x| GroupElement::from_i64(x).expect("nonzero")).collect()
}

pub fn selftest(ctx: &PrecisionContext) -> Result<Report> {
    type Check = fn(&PrecisionContext) -> Result<bool>;
    let checks: Vec<(&str, Check)> = vec![
        ("h(3/2) = log 3", |ctx| {
            Ok(weil_height(&GroupElement::from_rational(&q(3, 2))?, ctx)? == log(3))
        }),
        ("h(<2,3>) = (3/2) log 2 log 3", |ctx| {
            let p = build_presentation(&ints(&[2, 3]), ctx)?;
            Ok(subgroup_height_of(&p, ctx)? == (&log(2) * &log(3)).scale(&q(3, 2)))
        }),
        ("S-unit height for S = {inf, 2, 3}", |ctx| {
            let r = sunit_height(&SUnitContext::rational(&[2, 3])?, ctx)?;
            Ok(r.height == r.group_height)
        }),
        ("hexagon volume 12", |ctx| {
            let z = ZonotopeSpec::from_rational(&int_matrix(&[&[1, 0, 1], &[0, 1, 1]]).map(|x| BigRational::from_integer(x.clone())))?;
            Ok(mcmullen_volume(&z, ctx)? == Real::from_i64(12))
        }),
        ("zonoid volume matches McMullen", |ctx| {
            let s = build_presentation(&ints(&[2, 3]), ctx)?.system(ctx)?;
            Ok(zonoid_volume(&s, ctx)? == mcmullen_volume(&ZonotopeSpec::new(s.weighted())?, ctx)?)
        }),
        ("minima of <2,3> are 2 log 2, 2 log 3", |ctx| {
            let s = build_presentation(&ints(&[2, 3]), ctx)?.system(ctx)?;
            let r = successive_minima(&s, ctx)?;
            Ok(r.norms == vec![log(2).scale(&q(2, 1)), log(3).scale(&q(2, 1))])
        }),
        ("identity system attains 4^N/N!", |ctx| {
            let s = SimpleSystem::from_rational(vec![q(1, 1); 2], &subgroup_height::RatMatrix::identity(2), ctx)?;
            Ok(minkowski_check(&s, ctx)?.certificates[1].verdict == subgroup_height::Verdict::Equal)
        }),
        ("dependencies of (2, 3, 6)", |ctx| {
            let c = certify_thm2(&ints(&[2, 3, 6]), ctx)?;
            Ok(c.passed() && c.dependencies.product == BigInt::from(1))
        }),
    ];
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, check) in checks {
        let ok = matches!(check(ctx), Ok(true));
        passed &= ok;
        writeln!(text, "{} {name}", if ok { "PASS" } else { "FAIL" }).unwrap();
        results.push(json!({"check": name, "status": if ok { "PASS" } else { "FAIL" }}));
    }
    Ok(Report { json: json!({"checks": results}), text, passed })
}
