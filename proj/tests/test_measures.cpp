#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <tsinfo/measures.hpp>
#include <tsinfo/rng.hpp>
#include <tsinfo/var1.hpp>
#include <vector>

using namespace tsinfo;

namespace {

constexpr double kHalfLog2PiE = 1.4189385332046727;
constexpr double kHalfLn2 = 0.34657359027997264;

MeasureRequest make_request(MeasureId id, std::string source, std::string target,
                            EstimatorKind est) {
  MeasureRequest req;
  req.id = id;
  req.source = std::move(source);
  req.target = std::move(target);
  req.estimator = est;
  return req;
}

Dataset white_noise_pair(long t_len, std::uint64_t seed) {
  NormalSampler normal(seed);
  std::vector<double> a, b;
  for (long i = 0; i < t_len; ++i) {
    a.push_back(normal.next());
    b.push_back(normal.next());
  }
  return Dataset({TimeSeries(a, "x"), TimeSeries(b, "y")});
}

// Bounded support keeps box-kernel neighborhoods occupied at modest N.
Dataset uniform_noise_pair(long t_len, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> a, b;
  for (long i = 0; i < t_len; ++i) {
    a.push_back(rng.uniform_pm1());
    b.push_back(rng.uniform_pm1());
  }
  return Dataset({TimeSeries(a, "x"), TimeSeries(b, "y")});
}

Var1System scalar_ar(double phi) {
  Var1System sys;
  sys.coefficients.resize(1, 1);
  sys.coefficients << phi;
  sys.innovation_cov.resize(1, 1);
  sys.innovation_cov << 1.0;
  return sys;
}

Dataset var_a_data(long t_len, std::uint64_t seed) {
  return gen_var1(var_a_fixture(), t_len, seed, 1000, {"x", "y"});
}

Dataset shuffled(const Dataset& ds, std::uint64_t seed, const std::string& only_column = "") {
  const long t_len = ds.length();
  std::vector<long> perm(static_cast<std::size_t>(t_len));
  for (long i = 0; i < t_len; ++i) perm[static_cast<std::size_t>(i)] = i;
  SplitMix64 rng(seed);
  for (long i = t_len - 1; i > 0; --i) {
    const long j = static_cast<long>(rng.next() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<TimeSeries> cols;
  for (const auto& col : ds.columns()) {
    if (!only_column.empty() && col.name() != only_column) {
      cols.push_back(col);
      continue;
    }
    std::vector<double> values(static_cast<std::size_t>(t_len));
    for (long i = 0; i < t_len; ++i) {
      values[static_cast<std::size_t>(i)] =
          col.values()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    }
    cols.emplace_back(std::move(values), col.name());
  }
  return Dataset(std::move(cols));
}

const std::vector<EstimatorKind> kEntropyEstimators = {
    EstimatorKind::gaussian(), EstimatorKind::kozachenko(), EstimatorKind::kernel(),
    EstimatorKind::ksg()};

}  // namespace

TEST_CASE("entropy: gaussian path reproduces the closed form on its own variance") {
  const Dataset ds = white_noise_pair(5000, 1);
  const auto res = evaluate(ds, make_request(MeasureId::Entropy, "", "x",
                                             EstimatorKind::gaussian()));
  const auto& v = ds.column("x").values();
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double ml_var = ss / static_cast<double>(v.size());
  CHECK(res.value == doctest::Approx(kHalfLog2PiE + 0.5 * std::log(ml_var)).epsilon(1e-12));
  CHECK(res.n_eff == 5000);
}

TEST_CASE("entropy: kozachenko on a long normal series") {
  const Dataset ds = white_noise_pair(100000, 2);
  const auto res = evaluate(ds, make_request(MeasureId::Entropy, "", "x",
                                             EstimatorKind::kozachenko()));
  CHECK(std::fabs(res.value - kHalfLog2PiE) < 0.02);
}

TEST_CASE("entropy rejects a source column") {
  const Dataset ds = white_noise_pair(100, 3);
  CHECK_THROWS_AS(evaluate(ds, make_request(MeasureId::Entropy, "x", "y",
                                            EstimatorKind::gaussian())),
                  Error);
}

TEST_CASE("joint entropy on correlated gaussians") {
  const Dataset base = white_noise_pair(100000, 5);
  SUBCASE("independent columns") {
    const auto res = evaluate(base, make_request(MeasureId::JointEntropy, "x", "y",
                                                 EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - 2.8378770664093453) < 0.01);
  }
  SUBCASE("correlation one half") {
    std::vector<double> yv;
    const auto& x = base.column("x").values();
    const auto& z = base.column("y").values();
    for (std::size_t i = 0; i < x.size(); ++i) {
      yv.push_back(0.5 * x[i] + std::sqrt(0.75) * z[i]);
    }
    const Dataset ds({base.column("x"), TimeSeries(yv, "y")});
    const auto res = evaluate(ds, make_request(MeasureId::JointEntropy, "x", "y",
                                               EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - 2.694036030183455) < 0.01);
  }
  SUBCASE("duplicated column is singular") {
    const Dataset dup({base.column("x"), TimeSeries(base.column("x").values(), "y")});
    try {
      evaluate(dup, make_request(MeasureId::JointEntropy, "x", "y", EstimatorKind::gaussian()));
      FAIL("expected SingularCovariance");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SingularCovariance);
    }
  }
}

TEST_CASE("mutual information closed forms and errors") {
  SUBCASE("exactly uncorrelated columns give exactly zero") {
    const Dataset ds({TimeSeries({1, -1, 1, -1}, "x"), TimeSeries({1, 1, -1, -1}, "y")});
    const auto res = evaluate(ds, make_request(MeasureId::MutualInformation, "x", "y",
                                               EstimatorKind::gaussian()));
    CHECK(res.value == 0.0);
  }
  SUBCASE("crafted correlation one half") {
    const double w = std::sqrt(3.0) / 2.0;
    const Dataset ds({TimeSeries({1, -1, 1, -1}, "x"),
                      TimeSeries({0.5 + w, -0.5 + w, 0.5 - w, -0.5 - w}, "y")});
    const auto res = evaluate(ds, make_request(MeasureId::MutualInformation, "x", "y",
                                               EstimatorKind::gaussian()));
    CHECK(res.value == doctest::Approx(0.14384103622589046).epsilon(1e-12));
  }
  SUBCASE("perfect correlation is a typed error") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 * v - 1.0);
    const Dataset ds({TimeSeries(x, "x"), TimeSeries(y, "y")});
    try {
      evaluate(ds, make_request(MeasureId::MutualInformation, "x", "y",
                                EstimatorKind::gaussian()));
      FAIL("expected PerfectCorrelation");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::PerfectCorrelation);
    }
  }
  SUBCASE("contemporaneous fixture columns are uncoupled") {
    const auto res = evaluate(var_a_data(100000, 7),
                              make_request(MeasureId::MutualInformation, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value) < 0.01);
  }
}

TEST_CASE("conditional entropy composes from joint minus marginal") {
  const Dataset ds = white_noise_pair(100000, 9);
  const auto res = evaluate(ds, make_request(MeasureId::ConditionalEntropy, "x", "y",
                                             EstimatorKind::gaussian()));
  CHECK(std::fabs(res.value - kHalfLog2PiE) < 0.01);
}

TEST_CASE("chain rule is exact for every estimator") {
  const Dataset ds = uniform_noise_pair(1000, 11);
  for (const auto& est : kEntropyEstimators) {
    const double hx = evaluate(ds, make_request(MeasureId::Entropy, "", "x", est)).value;
    const double hxy = evaluate(ds, make_request(MeasureId::JointEntropy, "x", "y", est)).value;
    const double ce = evaluate(ds, make_request(MeasureId::ConditionalEntropy, "x", "y", est)).value;
    CHECK(std::fabs(hxy - (hx + ce)) < 1e-12);
  }
}

TEST_CASE("MI symmetry within 1e-12 for every estimator") {
  const Dataset ds = uniform_noise_pair(1000, 13);
  for (const auto& est : kEntropyEstimators) {
    const double ab = evaluate(ds, make_request(MeasureId::MutualInformation, "x", "y", est)).value;
    const double ba = evaluate(ds, make_request(MeasureId::MutualInformation, "y", "x", est)).value;
    CHECK(std::fabs(ab - ba) < 1e-12);
  }
}

TEST_CASE("order-independent measures ignore a shared row permutation") {
  const Dataset ds = uniform_noise_pair(1000, 15);
  const Dataset perm = shuffled(ds, 99);
  for (const auto& est : kEntropyEstimators) {
    for (MeasureId id : {MeasureId::Entropy, MeasureId::JointEntropy,
                         MeasureId::MutualInformation, MeasureId::ConditionalEntropy}) {
      const bool single = !measure_info(id).pairwise;
      const auto req = make_request(id, single ? "" : "x", single ? "x" : "y", est);
      const double a = evaluate(ds, req).value;
      const double b = evaluate(perm, req).value;
      CHECK(std::fabs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("active information storage") {
  SUBCASE("iid noise stores nothing") {
    const auto res = evaluate(white_noise_pair(100000, 17),
                              make_request(MeasureId::ActiveInformationStorage, "", "x",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value) < 0.01);
  }
  SUBCASE("AR(1) phi=0.8 stores -ln(1-phi^2)/2") {
    const Dataset ar = gen_var1(scalar_ar(0.8), 100000, 19);
    const auto res = evaluate(ar, make_request(MeasureId::ActiveInformationStorage, "", "z1",
                                               EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - 0.5108256237659907) < 0.01);
  }
  SUBCASE("shuffling destroys storage") {
    const Dataset ar = gen_var1(scalar_ar(0.8), 10000, 21);
    const auto req = make_request(MeasureId::ActiveInformationStorage, "", "z1",
                                  EstimatorKind::gaussian());
    const double stored = evaluate(ar, req).value;
    const double broken = evaluate(shuffled(ar, 23), req).value;
    CHECK(stored - broken > 0.4);
  }
  SUBCASE("alignment shrinks with memory length") {
    const Dataset ds = white_noise_pair(100, 25);
    auto req = make_request(MeasureId::ActiveInformationStorage, "", "x",
                            EstimatorKind::gaussian());
    req.k = 3;
    req.tau_target = 2;
    const auto res = evaluate(ds, req);
    // past block reaches (k-1)*tau + 1 = 5 steps back from the present
    CHECK(res.n_eff == 95);
  }
}

TEST_CASE("stochastic interaction") {
  SUBCASE("independent AR(1) pair cancels") {
    Var1System sys;
    sys.coefficients.resize(2, 2);
    sys.coefficients << 0.5, 0.0, 0.0, 0.3;
    sys.innovation_cov = Eigen::MatrixXd::Identity(2, 2);
    const Dataset ds = gen_var1(sys, 100000, 27, 1000, {"x", "y"});
    const auto res = evaluate(ds, make_request(MeasureId::StochasticInteraction, "x", "y",
                                               EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value) < 0.02);
  }
  SUBCASE("coupled fixture matches the analytic value") {
    const auto res = evaluate(var_a_data(100000, 29),
                              make_request(MeasureId::StochasticInteraction, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - kHalfLn2) < 0.02);
  }
  SUBCASE("identical copies are singular") {
    const Dataset ar = gen_var1(scalar_ar(0.8), 1000, 31);
    const Dataset dup({TimeSeries(ar.column("z1").values(), "x"),
                       TimeSeries(ar.column("z1").values(), "y")});
    try {
      evaluate(dup, make_request(MeasureId::StochasticInteraction, "x", "y",
                                 EstimatorKind::gaussian()));
      FAIL("expected SingularCovariance");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SingularCovariance);
    }
  }
}

TEST_CASE("time-lagged MI is directional on the coupled fixture") {
  const Dataset ds = var_a_data(100000, 33);
  const auto fwd = evaluate(ds, make_request(MeasureId::TimeLaggedMi, "x", "y",
                                             EstimatorKind::gaussian()));
  const auto rev = evaluate(ds, make_request(MeasureId::TimeLaggedMi, "y", "x",
                                             EstimatorKind::gaussian()));
  CHECK(std::fabs(fwd.value - 0.23500181462286778) < 0.01);
  CHECK(std::fabs(rev.value) < 0.01);

  const Dataset noise = white_noise_pair(100000, 35);
  const auto none = evaluate(noise, make_request(MeasureId::TimeLaggedMi, "x", "y",
                                                 EstimatorKind::gaussian()));
  CHECK(std::fabs(none.value) < 0.01);

  const Dataset small = var_a_data(10000, 37);
  const double f = evaluate(small, make_request(MeasureId::TimeLaggedMi, "x", "y",
                                                EstimatorKind::gaussian()))
                       .value;
  const double r = evaluate(small, make_request(MeasureId::TimeLaggedMi, "y", "x",
                                                EstimatorKind::gaussian()))
                       .value;
  CHECK(f > r + 0.1);
}

TEST_CASE("causally conditioned entropy") {
  SUBCASE("coupled fixture leaves only the innovation uncertainty") {
    const auto res = evaluate(var_a_data(100000, 39),
                              make_request(MeasureId::CausallyConditionedEntropy, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - 0.7257913526447274) < 0.02);
  }
  SUBCASE("independent target keeps its marginal entropy") {
    const auto res = evaluate(white_noise_pair(100000, 41),
                              make_request(MeasureId::CausallyConditionedEntropy, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - kHalfLog2PiE) < 0.02);
  }
}

TEST_CASE("directed information") {
  SUBCASE("independent pair sums to zero") {
    auto req = make_request(MeasureId::DirectedInformation, "x", "y",
                            EstimatorKind::gaussian());
    req.max_window = 2;
    const auto res = evaluate(white_noise_pair(100000, 43), req);
    CHECK(std::fabs(res.value) < 0.02);
  }
  SUBCASE("coupled fixture: the lag-1 term carries everything") {
    const Dataset ds = var_a_data(100000, 45);
    auto req = make_request(MeasureId::DirectedInformation, "x", "y",
                            EstimatorKind::gaussian());
    req.max_window = 2;
    const auto res = evaluate(ds, req);
    CHECK(std::fabs(res.value - kHalfLn2) < 0.03);
    REQUIRE(res.terms.size() == 2);
    CHECK(std::fabs(res.terms[0].second) < 0.01);
    CHECK(std::fabs(res.terms[1].second - kHalfLn2) < 0.03);

    req.max_window = 1;
    CHECK(std::fabs(evaluate(ds, req).value) < 0.01);
  }
  SUBCASE("value equals the term sum bit-for-bit") {
    const Dataset ds = uniform_noise_pair(5000, 47);
    // K=3 makes 6-dimensional joint blocks; the box kernel needs a wider
    // cell there to keep every neighborhood occupied.
    const std::vector<EstimatorKind> estimators = {
        EstimatorKind::gaussian(), EstimatorKind::kozachenko(),
        EstimatorKind::kernel(1.0), EstimatorKind::ksg()};
    for (const auto& est : estimators) {
      auto req = make_request(MeasureId::DirectedInformation, "x", "y", est);
      req.max_window = 3;
      const auto res = evaluate(ds, req);
      double sum = 0.0;
      for (const auto& [label, v] : res.terms) sum += v;
      CHECK(res.value == sum);
    }
  }
  SUBCASE("pooled approximation stays close at K=2 and is annotated") {
    const Dataset ds = var_a_data(100000, 49);
    auto req = make_request(MeasureId::DirectedInformation, "x", "y",
                            EstimatorKind::gaussian());
    req.max_window = 2;
    req.di_mode = DiMode::PooledApprox;
    const auto res = evaluate(ds, req);
    CHECK(!res.note.empty());
    // The k=0 term matches the exact mode; the k=1 entropy-rate term is
    // biased but bounded for this fixture.
    CHECK(std::fabs(res.terms[0].second) < 0.01);
    CHECK(std::isfinite(res.value));
  }
}

TEST_CASE("transfer entropy on the coupled fixture") {
  const Dataset ds = var_a_data(100000, 51);
  SUBCASE("gaussian matches the analytic value both ways") {
    const auto fwd = evaluate(ds, make_request(MeasureId::TransferEntropy, "x", "y",
                                               EstimatorKind::gaussian()));
    CHECK(std::fabs(fwd.value - kHalfLn2) < 0.01);
    const auto rev = evaluate(ds, make_request(MeasureId::TransferEntropy, "y", "x",
                                               EstimatorKind::gaussian()));
    CHECK(std::fabs(rev.value) < 0.01);
    CHECK(fwd.n_eff == ds.length() - 1);
  }
  SUBCASE("ksg agrees within estimator tolerance") {
    const auto res = evaluate(ds, make_request(MeasureId::TransferEntropy, "x", "y",
                                               EstimatorKind::ksg()));
    CHECK(std::fabs(res.value - kHalfLn2) < 0.03);
  }
  SUBCASE("shuffling the source destroys the transfer") {
    const Dataset small = var_a_data(10000, 53);
    const auto req = make_request(MeasureId::TransferEntropy, "x", "y",
                                  EstimatorKind::gaussian());
    CHECK(evaluate(small, req).value > 0.25);
    CHECK(evaluate(shuffled(small, 55, "x"), req).value < 0.05);
  }
}

TEST_CASE("granger causality") {
  SUBCASE("nested OLS keeps the log-ratio non-negative") {
    const auto res = evaluate(white_noise_pair(100000, 57),
                              make_request(MeasureId::GrangerCausality, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(res.value >= -1e-12);
    CHECK(res.value < 0.01);
  }
  SUBCASE("coupled fixture gives ln 2") {
    const auto res = evaluate(var_a_data(100000, 59),
                              make_request(MeasureId::GrangerCausality, "x", "y",
                                           EstimatorKind::gaussian()));
    CHECK(std::fabs(res.value - 0.6931471805599453) < 0.02);
  }
  SUBCASE("equals twice the gaussian transfer entropy") {
    for (std::uint64_t seed : {61ULL, 63ULL}) {
      const Dataset ds = white_noise_pair(1000, seed);
      for (int k : {1, 2}) {
        auto gc = make_request(MeasureId::GrangerCausality, "x", "y", EstimatorKind::gaussian());
        auto te = make_request(MeasureId::TransferEntropy, "x", "y", EstimatorKind::gaussian());
        gc.k = te.k = k;
        gc.l = te.l = 2;
        const double g = evaluate(ds, gc).value;
        const double t = evaluate(ds, te).value;
        CHECK(std::fabs(g - 2.0 * t) <= 1e-9 * std::max(1.0, std::fabs(g)));
      }
    }
    const Dataset coupled = var_a_data(10000, 65);
    const double g = evaluate(coupled, make_request(MeasureId::GrangerCausality, "x", "y",
                                                    EstimatorKind::gaussian()))
                         .value;
    const double t = evaluate(coupled, make_request(MeasureId::TransferEntropy, "x", "y",
                                                    EstimatorKind::gaussian()))
                         .value;
    CHECK(std::fabs(g - 2.0 * t) <= 1e-9 * std::fabs(g));
  }
  SUBCASE("noiseless linear target is rank-degenerate") {
    NormalSampler normal(67);
    std::vector<double> x, y;
    x.push_back(normal.next());
    y.push_back(normal.next());
    for (long t = 1; t < 500; ++t) {
      x.push_back(normal.next());
      y.push_back(0.7 * y.back() + 0.3 * x[static_cast<std::size_t>(t - 1)]);
    }
    const Dataset ds({TimeSeries(x, "x"), TimeSeries(y, "y")});
    try {
      evaluate(ds, make_request(MeasureId::GrangerCausality, "x", "y",
                                EstimatorKind::gaussian()));
      FAIL("expected RankDeficient");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::RankDeficient);
    }
  }
}

TEST_CASE("ksg paths agree with entropy-difference paths on coupled data") {
  const Dataset ds = var_a_data(20000, 69);
  const auto ksg_te = evaluate(ds, make_request(MeasureId::TransferEntropy, "x", "y",
                                                EstimatorKind::ksg()));
  const auto koz_te = evaluate(ds, make_request(MeasureId::TransferEntropy, "x", "y",
                                                EstimatorKind::kozachenko()));
  CHECK(std::fabs(ksg_te.value - koz_te.value) < 0.1);
}

TEST_CASE("k larger than T is an empty alignment") {
  const Dataset ds = white_noise_pair(10, 71);
  auto req = make_request(MeasureId::TransferEntropy, "x", "y", EstimatorKind::gaussian());
  req.k = 12;
  try {
    evaluate(ds, req);
    FAIL("expected EmptyAlignment");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyAlignment);
  }
}

TEST_CASE("request validation") {
  const Dataset ds = white_noise_pair(100, 73);
  auto bad_tau = make_request(MeasureId::TransferEntropy, "x", "y", EstimatorKind::gaussian());
  bad_tau.tau_source = 0;
  CHECK_THROWS_AS(evaluate(ds, bad_tau), Error);
  auto bad_k = make_request(MeasureId::ActiveInformationStorage, "", "x",
                            EstimatorKind::gaussian());
  bad_k.k = 0;
  CHECK_THROWS_AS(evaluate(ds, bad_k), Error);
  auto no_src = make_request(MeasureId::TransferEntropy, "", "y", EstimatorKind::gaussian());
  CHECK_THROWS_AS(evaluate(ds, no_src), Error);
  auto missing = make_request(MeasureId::MutualInformation, "zz", "y", EstimatorKind::gaussian());
  CHECK_THROWS_AS(evaluate(ds, missing), Error);
  auto bad_K = make_request(MeasureId::DirectedInformation, "x", "y", EstimatorKind::gaussian());
  bad_K.max_window = 0;
  CHECK_THROWS_AS(evaluate(ds, bad_K), Error);
}

TEST_CASE("measure registry and parsing") {
  CHECK(measure_registry().size() == 11);
  CHECK(parse_measure_id("te") == MeasureId::TransferEntropy);
  CHECK(parse_measure_id("transfer_entropy") == MeasureId::TransferEntropy);
  CHECK(parse_measure_id("gc") == MeasureId::GrangerCausality);
  CHECK_THROWS_AS(parse_measure_id("bogus"), Error);
  CHECK(measure_info(MeasureId::MutualInformation).direction == Direction::Undirected);
  CHECK(measure_info(MeasureId::TimeLaggedMi).direction == Direction::Directed);
  CHECK(!measure_info(MeasureId::Entropy).pairwise);
  CHECK(measure_info(MeasureId::Entropy).order_dependent == false);
  CHECK(measure_info(MeasureId::ActiveInformationStorage).order_dependent);
  CHECK(default_estimator_for(MeasureId::TransferEntropy).tag == EstimatorKind::Tag::Ksg);
  CHECK(default_estimator_for(MeasureId::Entropy).tag == EstimatorKind::Tag::Kozachenko);
  CHECK(default_estimator_for(MeasureId::GrangerCausality).tag == EstimatorKind::Tag::Gaussian);
}
