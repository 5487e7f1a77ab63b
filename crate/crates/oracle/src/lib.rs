#![allow(clippy::excessive_precision)]

//! Independent numerical oracles for the test suites.
//!
//! Everything here is deliberately naive: adaptive Gauss-Kronrod quadrature
//! applied directly to the defining integrals. None of it shares code with the
//! production paths, which go through incomplete-beta continued fractions.

/// Kronrod abscissae for the 21-point rule on [-1, 1] (nonnegative half).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_168,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the embedded 10-point rule (nodes XGK[1], XGK[3], ...).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const REL_TOL: f64 = 1e-14;
const MAX_DEPTH: u32 = 60;

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, depth: u32) -> f64 {
    let (k, err) = gk21(f, a, b);
    if err <= abs_tol.max(REL_TOL * k.abs()) || depth >= MAX_DEPTH || b - a < 1e-15 {
        return k;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * abs_tol, depth + 1) + adapt(f, mid, b, 0.5 * abs_tol, depth + 1)
}

/// Adaptive Gauss-Kronrod (G10/K21) integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (rough, _) = gk21(&f, a, b);
    let abs_tol = (REL_TOL * rough.abs()).max(1e-300);
    adapt(&f, a, b, abs_tol, 0)
}

/// `∫_lo^hi t^(alpha-1) g(t) dt` for `0 <= lo < hi`, removing a possible
/// endpoint singularity at zero through `u = t^alpha` when `alpha < 1`.
pub fn integrate_power_weighted<G: Fn(f64) -> f64>(alpha: f64, g: G, lo: f64, hi: f64) -> f64 {
    if alpha < 1.0 {
        let inv = 1.0 / alpha;
        integrate(|u: f64| g(u.powf(inv)), lo.powf(alpha), hi.powf(alpha)) / alpha
    } else {
        integrate(|t: f64| t.powf(alpha - 1.0) * g(t), lo, hi)
    }
}

/// `∫_lo^hi p^(a-1) (1-p)^(b-1) dp` with `0 <= lo < hi <= 1`.
///
/// Split at the midpoint; the left half is substituted at zero and the right
/// half is reflected and substituted at one.
pub fn beta_interval(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let left = integrate_power_weighted(a, |p| (1.0 - p).powf(b - 1.0), lo, mid);
    let right = integrate_power_weighted(b, |q| (1.0 - q).powf(a - 1.0), 1.0 - hi, 1.0 - mid);
    left + right
}

/// Posterior mean of `p` under the kernel `p^(a-1)(1-p)^(b-1)` on `[lo, hi]`.
pub fn truncated_beta_mean(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    beta_interval(a + 1.0, b, lo, hi) / beta_interval(a, b, lo, hi)
}

/// `∫_0^1 t^(alpha-1) / {1 - p_bar (1 - t)}^gamma dt`.
pub fn i_integral(alpha: f64, gamma: f64, p_bar: f64) -> f64 {
    integrate_power_weighted(alpha, |t| (1.0 - p_bar * (1.0 - t)).powf(-gamma), 0.0, 1.0)
}

/// The same integrand as [`i_integral`] over `[rho, 1]`.
pub fn i_integral_from(alpha: f64, gamma: f64, p_bar: f64, rho: f64) -> f64 {
    integrate_power_weighted(alpha, |t| (1.0 - p_bar * (1.0 - t)).powf(-gamma), rho, 1.0)
}

/// `∫_0^1 t^(a-1) {1 - p(1-t)}^n / {1 - p_bar(1-t)}^(n+a+b+1) dt`.
pub fn j_integral(p: f64, n: u32, a: f64, b: f64, p_bar: f64) -> f64 {
    let gamma = n as f64 + a + b + 1.0;
    integrate_power_weighted(
        a,
        |t| (1.0 - p * (1.0 - t)).powi(n as i32) * (1.0 - p_bar * (1.0 - t)).powf(-gamma),
        0.0,
        1.0,
    )
}

/// `∫_0^hi λ^(s-1) e^(-rate λ) dλ`.
pub fn gamma_kernel_integral(s: f64, rate: f64, hi: f64) -> f64 {
    integrate_power_weighted(s, |lam| (-rate * lam).exp(), 0.0, hi)
}

/// Binomial coefficient as a running product; independent of any log-gamma.
pub fn binomial_coefficient(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Binomial pmf by multiplying the factors one at a time.
pub fn binomial_pmf_direct(x: u32, n: u32, p: f64) -> f64 {
    let mut v = binomial_coefficient(n, x);
    for _ in 0..x {
        v *= p;
    }
    for _ in 0..(n - x) {
        v *= 1.0 - p;
    }
    v
}
