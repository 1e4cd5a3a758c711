#include <doctest.h>

#include <random>

#include "nfp/error.hpp"
#include "nfp/kernel.hpp"
#include "nfp/model_io.hpp"
#include "nfp/multiclass.hpp"
#include "nfp/selection.hpp"
#include "nfp/smo.hpp"
#include "svm_cases.hpp"

using namespace nfp;

namespace {

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> data) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()),
                    static_cast<Eigen::Index>(data.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : data) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

SmoParams tight(double c) {
  SmoParams p;
  p.C = c;
  p.tol = 1e-9;
  p.max_passes = 100000;
  p.max_updates = 1'000'000;
  p.eps = 1e-15;
  return p;
}

}  // namespace

TEST_CASE("kernel values") {
  const Eigen::Vector2d x(1.0, 2.0), y(3.0, 4.0);
  CHECK(Kernel::linear()(x, y) == 11.0);
  CHECK(Kernel::polynomial(2, 0.5, 1.0)(x, y) == doctest::Approx(42.25));
  CHECK(Kernel::polynomial(2, 1.0, 0.0)(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1)) == 4.0);
  CHECK(Kernel::rbf(0.1)(x, y) == doctest::Approx(std::exp(-0.8)));
  CHECK_THROWS_AS(Kernel::linear()(x, Eigen::Vector3d(1, 2, 3)), InvalidArgument);
  CHECK_THROWS_AS(Kernel::polynomial(2, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Kernel::rbf(-1.0), InvalidArgument);
  CHECK(Kernel::rbf(10).label() == "rbf(g=10)");
  CHECK(kernel_from_json(to_json(Kernel::polynomial(3, 0.25, 1.0))) ==
        Kernel::polynomial(3, 0.25, 1.0));
}

TEST_CASE("Gram matrices") {
  const Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(2, 2);
  CHECK(gram(basis, Kernel::linear()) == Eigen::MatrixXd::Identity(2, 2));

  std::mt19937_64 gen(3);
  std::normal_distribution<double> n;
  Eigen::MatrixXd x(30, 5);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = n(gen);
  for (const Kernel& k : {Kernel::linear(), Kernel::polynomial(2, 0.2, 1.0),
                          Kernel::polynomial(3, 0.2, 1.0), Kernel::polynomial(4, 0.2, 1.0),
                          Kernel::rbf(0.2), Kernel::rbf(10.0)}) {
    const Eigen::MatrixXd g = gram(x, k);
    CHECK(g == g.transpose());
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff();
    CHECK(min_eig >= -1e-8 * g.trace());
    if (k.kind == KernelKind::Rbf)
      for (Eigen::Index i = 0; i < g.rows(); ++i) CHECK(g(i, i) == 1.0);
    CHECK((cross_kernel(x, x, k) - g).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-point dual has the analytic optimum") {
  const Eigen::MatrixXd x = rows({{1.0}, {-1.0}});
  const BinaryModel m = train_binary(x, {1, -1}, Kernel::linear(), SmoParams{10.0});
  REQUIRE(m.coef.size() == 2);
  CHECK(std::abs(m.coef(0) - 0.5) < 1e-12);
  CHECK(std::abs(m.coef(1) + 0.5) < 1e-12);
  CHECK(std::abs(m.bias) < 1e-12);
  CHECK(std::abs(m.decision(Eigen::VectorXd::Zero(1))) < 1e-12);
  // w = 1, so the margin 2 / |w| is 2
  CHECK(m.decision(Eigen::VectorXd::Constant(1, 1.0)) == doctest::Approx(1.0));
  CHECK(predict(m, Eigen::VectorXd::Constant(1, 0.5)) == 1);
  CHECK(predict(m, Eigen::VectorXd::Constant(1, -0.5)) == -1);
  CHECK(predict(m, Eigen::VectorXd::Zero(1)) == 1);
  CHECK(m.converged);
}

TEST_CASE("XOR is separable with an RBF kernel") {
  const Eigen::MatrixXd x = rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y{-1, -1, 1, 1};
  const BinaryModel m = train_binary(x, y, Kernel::rbf(1.0), SmoParams{10.0});
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(predict(m, x.row(i).transpose()) == y[static_cast<std::size_t>(i)]);
  const auto ref = oracle::solve_dual(gram(x, Kernel::rbf(1.0)), y, 10.0);
  CHECK(std::abs(m.dual_objective - ref.objective) < 1e-5);
}

TEST_CASE("training errors") {
  const Eigen::MatrixXd x = rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(train_binary(x, {1, 1}, Kernel::linear(), {}), InvalidArgument);
  CHECK_THROWS_AS(train_binary(x, {1, 0}, Kernel::linear(), {}), InvalidArgument);
  CHECK_THROWS_AS(train_binary(x, {1}, Kernel::linear(), {}), InvalidArgument);
  CHECK_THROWS_AS(train_binary(x, {1, -1}, Kernel::linear(), SmoParams{0.0}), InvalidArgument);
  const BinaryModel m = train_binary(x, {1, -1}, Kernel::linear(), {});
  CHECK_THROWS_AS(m.decision(Eigen::Vector2d(0, 0)), InvalidArgument);
}

TEST_CASE("KKT conditions and feasibility at the default tolerance") {
  for (std::size_t i = 0; i < 50; ++i) {
    const auto p = cases::random_problem(i);
    const Eigen::MatrixXd g = gram(p.x, p.kernel);
    SmoParams params;
    params.C = p.C;
    const SmoSolution s = solve_smo(g, p.y, params);
    CAPTURE(i);
    REQUIRE(s.converged);
    double balance = 0.0;
    for (Eigen::Index j = 0; j < s.alpha.size(); ++j) {
      CHECK(s.alpha(j) >= 0.0);
      CHECK(s.alpha(j) <= p.C);
      balance += s.alpha(j) * p.y[static_cast<std::size_t>(j)];
    }
    CHECK(std::abs(balance) <= 1e-8);
    CHECK(kkt_violation(g, p.y, s.alpha, s.bias, p.C) <= 1e-3);
    CHECK((s.alpha.array() > 0.0).any());
  }
}

TEST_CASE("dual objective never decreases across updates") {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto p = cases::random_problem(i);
    const Eigen::MatrixXd g = gram(p.x, p.kernel);
    SmoParams params;
    params.C = p.C;
    const std::size_t total = solve_smo(g, p.y, params).updates;
    double previous = 0.0;
    for (std::size_t k = 1; k <= total; ++k) {
      params.max_updates = k;
      const double obj = solve_smo(g, p.y, params).objective;
      CHECK(obj >= previous - 1e-12);
      previous = obj;
    }
  }
}

TEST_CASE("SMO matches the projected-gradient oracle") {
  for (std::size_t i = 0; i < 20; ++i) {
    const auto c = cases::compare(cases::random_problem(i), 1e-9);
    CAPTURE(i);
    CHECK(c.objective_gap < 1e-6);
    CHECK(c.mismatches == 0);
  }
}

TEST_CASE("update budget flags non-convergence") {
  const auto p = cases::random_problem(4);
  SmoParams params;
  params.C = p.C;
  params.max_updates = 1;
  const SmoSolution s = solve_smo(gram(p.x, p.kernel), p.y, params);
  CHECK_FALSE(s.converged);
  CHECK(s.updates == 1);
}

TEST_CASE("duplicating a training point keeps separable predictions") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(16, 2);
  std::vector<int> y(16);
  for (int i = 0; i < 16; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    x(i, 0) = 1.5 * label + 0.5 * u(gen);
    x(i, 1) = u(gen);
    y[static_cast<std::size_t>(i)] = label;
  }
  const BinaryModel base = train_binary(x, y, Kernel::linear(), tight(1000.0));
  for (int dup = 0; dup < 16; ++dup) {
    Eigen::MatrixXd xd(17, 2);
    xd << x, x.row(dup);
    std::vector<int> yd = y;
    yd.push_back(y[static_cast<std::size_t>(dup)]);
    const BinaryModel m = train_binary(xd, yd, Kernel::linear(), tight(1000.0));
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b) {
        const Eigen::Vector2d point(0.3 * a, 0.3 * b);
        if (std::abs(base.decision(point)) < 1e-6) continue;
        CHECK(predict(m, point) == predict(base, point));
      }
  }
}

TEST_CASE("OVO voting") {
  std::vector<PairModel> models(3);
  models[0].positive = 0, models[0].negative = 1;
  models[1].positive = 0, models[1].negative = 2;
  models[2].positive = 1, models[2].negative = 2;
  // votes (2, 1, 0)
  CHECK(ovo_vote(models, {1.0, 1.0, 1.0}, 3) == 0);
  // 3-way tie, magnitudes 0.5 (class 0), 1.0 (class 1), 2.0 (class 2)
  CHECK(ovo_vote(models, {0.5, -2.0, 1.0}, 3) == 2);
  // complete tie
  CHECK(ovo_vote(models, {1.0, -1.0, 1.0}, 3) == 0);
  // zero decision counts for the positive class
  CHECK(ovo_vote(models, {0.0, 0.0, 0.0}, 3) == 0);
}

TEST_CASE("multiclass training") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n(0.0, 0.3);
  const int k = 4, per = 15;
  Eigen::MatrixXd x(k * per, 2);
  std::vector<int> labels;
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < per; ++i) {
      x(c * per + i, 0) = 3.0 * (c % 2) + n(gen);
      x(c * per + i, 1) = 3.0 * (c / 2) + n(gen);
      labels.push_back(c);
    }
  for (auto strategy : {MulticlassStrategy::OneVsOne, MulticlassStrategy::OneVsAll}) {
    const auto m = train_multiclass(x, labels, 4, Kernel::rbf(1.0), SmoParams{10.0}, strategy, 2);
    CHECK(m.models.size() == (strategy == MulticlassStrategy::OneVsOne ? 6u : 4u));
    CHECK(accuracy(m.predict_rows(x), labels) == 1.0);
    CHECK(m.converged());
    const auto back = multiclass_model_from_json(to_json(m, {"a", "b", "c", "d"}));
    CHECK(back.predict_rows(x) == m.predict_rows(x));
  }
  const auto one = train_multiclass(x, labels, 4, Kernel::linear(), SmoParams{1.0},
                                    MulticlassStrategy::OneVsOne, 1);
  const auto many = train_multiclass(x, labels, 4, Kernel::linear(), SmoParams{1.0},
                                     MulticlassStrategy::OneVsOne, 4);
  for (std::size_t i = 0; i < one.models.size(); ++i) {
    CHECK(one.models[i].model.coef == many.models[i].model.coef);
    CHECK(one.models[i].model.bias == many.models[i].model.bias);
  }
  CHECK_THROWS_AS(train_multiclass(x, labels, 3, Kernel::linear(), {}), InvalidArgument);
}

TEST_CASE("candidate grid order") {
  const auto cands = expand(CandidateGrid{}, 36);
  REQUIRE(cands.size() == 28);
  CHECK(cands[0].kernel == Kernel::linear());
  CHECK(cands[0].C == 0.1);
  CHECK(cands[3].C == 100.0);
  CHECK(cands[4].kernel == Kernel::polynomial(2, 1.0 / 36, 1.0));
  CHECK(cands[8].kernel.degree == 3);
  CHECK(cands[12].kernel.degree == 4);
  CHECK(cands[16].kernel == Kernel::rbf(1.0 / 36));
  CHECK(cands[20].kernel == Kernel::rbf(1.0));
  CHECK(cands[27].kernel == Kernel::rbf(10.0));
  CHECK(cands[27].C == 100.0);
}

TEST_CASE("selection tie goes to the earliest candidate") {
  // every candidate classifies this well-separated toy set perfectly
  LabeledDataset d;
  d.steps = {1};
  d.class_names = {"a", "b"};
  d.features = Eigen::MatrixXd::Zero(12, 4);
  for (int i = 0; i < 12; ++i) {
    const int label = i % 2;
    d.labels.push_back(label);
    d.features(i, label) = 1.0;
    d.features(i, 2) = 0.01 * i;
  }
  const Split s = split(d, {0.5, 0.25, 0.25}, 1);
  const auto report = model_select(d, s, expand(CandidateGrid{}, 4));
  CHECK(report.chosen == 0);
  CHECK(report.candidates.size() == 28);
  for (const auto& c : report.candidates) CHECK(c.validation_accuracy == 1.0);
  CHECK(report.test_accuracy == 1.0);
  const auto j = to_json(report);
  CHECK(j["chosen"]["index"] == 0);
}
