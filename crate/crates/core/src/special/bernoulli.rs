/// `B_{2k}` for `k = 1..=20`.
pub(crate) const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// `B_{2k} / (2k)!` for `k = 1..=20`.
pub(crate) fn scaled_bernoulli(k: usize) -> f64 {
    let mut fact = 1.0;
    for j in 1..=(2 * k) {
        fact *= j as f64;
    }
    BERNOULLI_EVEN[k - 1] / fact
}
