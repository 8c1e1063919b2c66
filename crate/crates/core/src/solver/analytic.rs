//! Closed-form rules of degree 1 to 9.
//!
//! Each type is given by a univariate eliminant whose roots parametrize
//! all of its rules, together with polynomial expressions in the root for
//! the remaining unknowns. Coefficients are exact rationals; everything is
//! evaluated at the working precision.

use rug::Rational;

use super::{dedupe, Completeness, Solution, SolutionSet};
use crate::exactnum::{poly_roots, roots_from_elem, Complex, UniPoly};
use crate::system::build_moment_system;
use crate::triangle::{CubatureRule, Orbit, Provenance, RuleType};
use crate::{Error, Result};

/// `(degree, type)` pairs with a closed form.
pub fn analytic_types() -> Vec<(u32, RuleType)> {
    [
        (1, [1, 0, 0]),
        (2, [0, 1, 0]),
        (3, [1, 1, 0]),
        (3, [0, 0, 1]),
        (4, [0, 2, 0]),
        (5, [1, 2, 0]),
        (6, [0, 2, 1]),
        (7, [1, 2, 1]),
        (7, [0, 1, 2]),
        (8, [1, 3, 1]),
        (9, [1, 4, 1]),
    ]
    .into_iter()
    .map(|(d, t)| (d, RuleType::try_from(t).expect("valid type")))
    .collect()
}

/// Polynomial from ascending coefficients written as `"n/d"` or `"n"`.
fn up(coeffs: &[&str]) -> UniPoly {
    UniPoly::new(
        coeffs
            .iter()
            .map(|s| s.parse::<Rational>().unwrap_or_else(|_| panic!("bad coefficient {s}")))
            .collect(),
    )
}

fn cr(s: &str, prec: u32) -> Complex {
    Complex::from_rational(&s.parse::<Rational>().expect("bad constant"), prec)
}

/// Median orbits from `ut_1..ut_n` with weights `v(u)`.
fn median_orbits(ut: Vec<Complex>, prec: u32, v: impl Fn(&Complex) -> Complex) -> Result<Vec<Orbit>> {
    let mut tilde = vec![Complex::one(prec)];
    tilde.extend(ut);
    roots_from_elem(&tilde, prec)?
        .into_iter()
        .map(|u| {
            let w = v(&u);
            Orbit::type1(u, w)
        })
        .collect()
}

fn centroid(w0: Complex) -> Orbit {
    Orbit::Type0 { w0 }
}

type Orbits = Vec<Orbit>;

fn degree1(prec: u32) -> Result<Vec<Orbits>> {
    Ok(vec![vec![centroid(Complex::one(prec))]])
}

fn degree2(prec: u32) -> Result<Vec<Orbits>> {
    poly_roots(&up(&["-1/4", "0", "1"]), prec)?
        .into_iter()
        .map(|u| Ok(vec![Orbit::type1(u, Complex::one(prec))?]))
        .collect()
}

fn degree3_median(prec: u32) -> Result<Vec<Orbits>> {
    Ok(vec![vec![
        centroid(cr("-9/16", prec)),
        Orbit::type1(cr("2/5", prec), cr("25/16", prec))?,
    ]])
}

fn degree3_general(prec: u32) -> Result<Vec<Orbits>> {
    Ok(vec![vec![Orbit::type2(cr("1/4", prec), cr("1/10", prec), Complex::one(prec))?]])
}

fn degree4(prec: u32) -> Result<Vec<Orbits>> {
    let ut2 = up(&["-2/5", "-2/5"]);
    let slope = up(&["-6/31", "81/248"]);
    let icept = up(&["151/248", "15/124"]);
    poly_roots(&up(&["-2", "-4", "3"]), prec)?
        .into_iter()
        .map(|t1| {
            let (a, b) = (slope.eval_complex(&t1), icept.eval_complex(&t1));
            median_orbits(vec![t1.clone(), ut2.eval_complex(&t1)], prec, |u| {
                a.clone() * u.clone() + b.clone()
            })
        })
        .collect()
}

fn degree5(prec: u32) -> Result<Vec<Orbits>> {
    let mut orbits = vec![centroid(cr("9/40", prec))];
    orbits.extend(median_orbits(vec![cr("-2/7", prec), cr("-2/7", prec)], prec, |u| {
        cr("-7/400", prec) * u.clone() + cr("39/100", prec)
    })?);
    Ok(vec![orbits])
}

fn degree6(prec: u32) -> Result<Vec<Orbits>> {
    let elim = up(&[
        "14953009/2517630976",
        "-7914723/78675968",
        "211997025/314703872",
        "-6335029/2809856",
        "12577377/3211264",
        "-2943/896",
        "1",
    ]);
    let q1 = up(&[
        "6773849/1180960",
        "-17597477/258335",
        "618894079/2066680",
        "-2009158/3355",
        "20120576/36905",
        "-6422528/36905",
    ]);
    let w1 = up(&[
        "88271353265388941906672/1552328339949698669325",
        "-2093018886005051378041487/3104656679899397338650",
        "4677969412268735483683874/1552328339949698669325",
        "-874483029603676756153618/141120758177245333575",
        "8938712246012353125723136/1552328339949698669325",
        "-2885760563751222732259328/1552328339949698669325",
    ]);
    let ut1 = up(&[
        "-5647577278829/5843759130",
        "219725386019839/17838843660",
        "-4934508553334726/84734507385",
        "965776421126167/7703137035",
        "-538505362157056/4459710915",
        "3379769853673472/84734507385",
    ]);
    let ut2 = up(&[
        "15104616525664/20453156955",
        "-581971572152849/62435952810",
        "3683852401439816/84734507385",
        "-709365733908202/7703137035",
        "389416992756736/4459710915",
        "-2417750126231552/84734507385",
    ]);
    let slope = up(&[
        "-68148358857994347902974327222077377/1265643655042427803898232778045800",
        "153804297816157841896911608744616331/210940609173737967316372129674300",
        "-1141034063408380347314793772529581321/316410913760606950974558194511450",
        "114666485932207310484775951381500251/14382314261845770498843554295975",
        "-410497105230467053184700451899528704/52735152293434491829093032418575",
        "409434268039529549940720811615256576/158205456880303475487279097255725",
    ]);
    let icept = up(&[
        "220460485921384140338311776720617/10910721164158860378433041190050",
        "-3169975113118311937146770957038031/10910721164158860378433041190050",
        "2716663212121457459566848039780239/1818453527359810063072173531675",
        "-1660804293851424897302836415981834/495941871098130017201501872275",
        "17884598780372115712297691281128448/5455360582079430189216520595025",
        "-660366862842903249663697383981056/606151175786603354357391177225",
    ]);
    poly_roots(&elim, prec)?
        .into_iter()
        .map(|p| {
            let (a, b) = (slope.eval_complex(&p), icept.eval_complex(&p));
            let mut orbits = median_orbits(vec![ut1.eval_complex(&p), ut2.eval_complex(&p)], prec, |u| {
                a.clone() * u.clone() + b.clone()
            })?;
            orbits.push(Orbit::type2(p.clone(), q1.eval_complex(&p), w1.eval_complex(&p))?);
            Ok(orbits)
        })
        .collect()
}

fn degree7_centroid(prec: u32) -> Result<Vec<Orbits>> {
    let elim = up(&["1619/37632", "-85/196", "655/448", "-23/12", "1"]);
    let q1 = up(&["73/160", "-63/20", "273/40", "-21/5"]);
    let w1 = up(&[
        "5559373039/1374543450",
        "-4035503891/196363350",
        "3029805464/98181675",
        "-577446688/32727225",
    ]);
    let ut1 = up(&["204779/4630", "-616196/2315", "978558/2315", "-585648/2315"]);
    let ut2 = up(&["-86623/2315", "511579/2315", "-811132/2315", "484512/2315"]);
    let slope = up(&[
        "14666951220214040085227/1267358803705954465940",
        "-9803429487627684799252/135788443254209407065",
        "3156091037460298906045/27157688650841881413",
        "-637366793665532978264/9052562883613960471",
    ]);
    let icept = up(&[
        "-109198370776069008639239/11406229233353590193460",
        "98256377831808794616331/1629461319050512884780",
        "-39124895515170463542614/407365329762628221195",
        "7823399076093706515424/135788443254209407065",
    ]);
    let w0 = up(&[
        "4347049032/703405115",
        "-752902776/20097289",
        "6057843876/100486445",
        "-3660769728/100486445",
    ]);
    poly_roots(&elim, prec)?
        .into_iter()
        .map(|p| {
            let (a, b) = (slope.eval_complex(&p), icept.eval_complex(&p));
            let mut orbits = vec![centroid(w0.eval_complex(&p))];
            orbits.extend(median_orbits(
                vec![ut1.eval_complex(&p), ut2.eval_complex(&p)],
                prec,
                |u| a.clone() * u.clone() + b.clone(),
            )?);
            orbits.push(Orbit::type2(p.clone(), q1.eval_complex(&p), w1.eval_complex(&p))?);
            Ok(orbits)
        })
        .collect()
}

fn degree7_general(prec: u32) -> Result<Vec<Orbits>> {
    let elim = up(&["1/36", "0", "-1/3", "-4/9", "1"]);
    let v1 = up(&["156673/8817780", "2159752/2204445", "5368006/2204445", "-3133452/734815"]);
    let pt1 = up(&["-1079/1281", "-310/1281", "-128/427", "720/427"]);
    let pt2 = up(&["1493/11956", "1130/8967", "2116/8967", "-2046/2989"]);
    let q_slope = up(&["489/427", "465/854", "288/427", "-1620/427"]);
    let q_icept = up(&["-653/2989", "-1695/5978", "-1587/2989", "9207/5978"]);
    let w_slope = up(&[
        "-22884360891/16395192280",
        "676519529/409879807",
        "34215330023/8197596140",
        "-21117033567/4098798070",
    ]);
    let w_icept = up(&[
        "103431908839/98371153680",
        "-10640567105/9837115368",
        "-123702006967/49185576840",
        "7377613908/2049399035",
    ]);
    poly_roots(&elim, prec)?
        .into_iter()
        .map(|u| {
            let mut orbits = vec![Orbit::type1(u.clone(), v1.eval_complex(&u))?];
            let ps = roots_from_elem(&[Complex::one(prec), pt1.eval_complex(&u), pt2.eval_complex(&u)], prec)?;
            let (qa, qb) = (q_slope.eval_complex(&u), q_icept.eval_complex(&u));
            let (wa, wb) = (w_slope.eval_complex(&u), w_icept.eval_complex(&u));
            for p in ps {
                let q = qa.clone() * p.clone() + qb.clone();
                let w = wa.clone() * p.clone() + wb.clone();
                orbits.push(Orbit::type2(p, q, w)?);
            }
            Ok(orbits)
        })
        .collect()
}

fn degree8(prec: u32) -> Result<Vec<Orbits>> {
    let elim = up(&["443/17750", "-116/355", "1"]);
    let w1 = up(&["-561275/4234608", "1286875/529326"]);
    let w0 = up(&["197671347/256973920", "-32981985/6424348"]);
    let ut = [
        up(&["-70340/50289", "181760/50289"]),
        up(&["10642/50289", "-124960/50289"]),
        up(&["14008/50289", "-50410/50289"]),
    ];
    // v = (a(u)) q1 + b(u) with a, b quadratic in u
    let a = up(&[
        "12430296145585635931273841/4551667418491984181195532",
        "19252524428004364259122223/4551667418491984181195532",
        "-18610928498796911607672845/2275833709245992090597766",
    ]);
    let b = up(&[
        "10275755611647081695669293/182066696739679367247821280",
        "-2452756844382101152643719/5689584273114980226494415",
        "11189621308192975569101651/22758337092459920905977660",
    ]);
    let p1 = cr("2/5", prec);
    poly_roots(&elim, prec)?
        .into_iter()
        .map(|q| {
            let mut orbits = vec![centroid(w0.eval_complex(&q))];
            orbits.extend(median_orbits(
                ut.iter().map(|t| t.eval_complex(&q)).collect(),
                prec,
                |u| a.eval_complex(u) * q.clone() + b.eval_complex(u),
            )?);
            orbits.push(Orbit::type2(p1.clone(), q.clone(), w1.eval_complex(&q))?);
            Ok(orbits)
        })
        .collect()
}

fn degree9(prec: u32) -> Result<Vec<Orbits>> {
    let v = up(&[
        "506023048885425107/1503746382262924800",
        "11465050245708013/334165862725094400",
        "-10064998401780383/12531219852191040",
        "52676213406614851/109363373255485440",
    ]);
    let ut = ["-212/407", "-1002/2035", "212/2035", "112/2035"]
        .iter()
        .map(|s| cr(s, prec))
        .collect();
    let mut orbits = vec![centroid(cr("85293/878080", prec))];
    orbits.extend(median_orbits(ut, prec, |u| v.eval_complex(u))?);
    orbits.push(Orbit::type2(cr("2/5", prec), cr("2/11", prec), cr("3025/11648", prec))?);
    Ok(vec![orbits])
}

/// Every rule of a type with a closed form, complex ones included.
pub fn solve_analytic(d: u32, t: RuleType, prec: u32) -> Result<SolutionSet> {
    let raw = match (d, [t.n0, t.n1, t.n2]) {
        (1, [1, 0, 0]) => degree1(prec)?,
        (2, [0, 1, 0]) => degree2(prec)?,
        (3, [1, 1, 0]) => degree3_median(prec)?,
        (3, [0, 0, 1]) => degree3_general(prec)?,
        (4, [0, 2, 0]) => degree4(prec)?,
        (5, [1, 2, 0]) => degree5(prec)?,
        (6, [0, 2, 1]) => degree6(prec)?,
        (7, [1, 2, 1]) => degree7_centroid(prec)?,
        (7, [0, 1, 2]) => degree7_general(prec)?,
        (8, [1, 3, 1]) => degree8(prec)?,
        (9, [1, 4, 1]) => degree9(prec)?,
        _ => return Err(Error::UnsupportedAnalytic { degree: d, rtype: t }),
    };
    let ms = build_moment_system(d, t)?;
    let mut solutions = Vec::with_capacity(raw.len());
    for orbits in raw {
        let residual = ms.orbit_residual(&orbits)?;
        let rule = CubatureRule::new(d, orbits, Provenance::Analytic)?;
        solutions.push(Solution { rule, residual });
    }
    let tol = 2f64.powi(-(prec as i32 / 2));
    Ok(SolutionSet {
        degree: d,
        rtype: t,
        solutions: dedupe(solutions, tol),
        completeness: Completeness::ExhaustiveAnalytic,
        diagnostics: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::QualityLabel::{self, *};

    #[test]
    fn all_closed_forms_solve_their_systems() {
        for (d, t) in analytic_types() {
            let set = solve_analytic(d, t, 256).unwrap();
            for s in &set.solutions {
                assert!(s.residual < 1e-40, "d={d} {t}: residual {:e}", s.residual);
            }
        }
    }

    #[test]
    fn quality_counts() {
        let expect: &[(u32, [u32; 3], &[(QualityLabel, usize)])] = &[
            (1, [1, 0, 0], &[(PI, 1)]),
            (2, [0, 1, 0], &[(PI, 1), (PB, 1)]),
            (3, [1, 1, 0], &[(NI, 1)]),
            (3, [0, 0, 1], &[(PI, 1)]),
            (4, [0, 2, 0], &[(PI, 1), (PO, 1)]),
            (5, [1, 2, 0], &[(PI, 1)]),
            (6, [0, 2, 1], &[(PI, 2), (PO, 2), (CC, 2)]),
            (7, [1, 2, 1], &[(NI, 1), (PO, 1), (CC, 2)]),
            (7, [0, 1, 2], &[(PI, 2), (CC, 2)]),
            (8, [1, 3, 1], &[(PI, 1), (NI, 1)]),
            (9, [1, 4, 1], &[(PI, 1)]),
        ];
        for &(d, t, counts) in expect {
            let set = solve_analytic(d, RuleType::try_from(t).unwrap(), 256).unwrap();
            assert_eq!(set.counts(), counts.to_vec(), "d={d} {t:?}");
        }
    }

    #[test]
    fn outside_catalog_is_refused() {
        let t = RuleType::new(1, 2, 3).unwrap();
        assert!(matches!(solve_analytic(10, t, 128), Err(Error::UnsupportedAnalytic { .. })));
    }
}
