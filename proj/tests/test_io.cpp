#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "garchvb/errors.hpp"
#include "garchvb/io.hpp"

using namespace garchvb;

namespace {

// Scratch file under the system temp dir, removed when the case ends.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / ("garchvb_test_" + name)) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  std::string str() const { return path.string(); }
  void write(const std::string& text) const {
    std::ofstream out(path);
    out << text;
  }
};

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("return series with and without a header") {
    const TempFile f("returns.csv");
    f.write("return\n1.5\n-2.25\n0\n");
    const ReturnSeries with_header = load_returns(f.str());
    CHECK(with_header.values == std::vector<double>{1.5, -2.25, 0.0});
    CHECK_FALSE(with_header.from_prices);

    f.write("1.5\n2.5\n");
    CHECK(load_returns(f.str()).values == std::vector<double>{1.5, 2.5});

    f.write("return\n\n  1.5 \n\n-0.5\n");  // blank lines and padding ignored
    CHECK(load_returns(f.str()).values == std::vector<double>{1.5, -0.5});
  }

  TEST_CASE("return series parse failures carry the row number") {
    const TempFile f("bad_returns.csv");
    f.write("return\n1.0\nabc\n");
    CHECK_THROWS_WITH_AS(load_returns(f.str()), doctest::Contains("row 3"), ParseError);
    f.write("1.0\nnan\n");
    CHECK_THROWS_WITH_AS(load_returns(f.str()), doctest::Contains("row 2"), ParseError);
    f.write("return\n");
    CHECK_THROWS_AS(load_returns(f.str()), DegenerateSeries);
    CHECK_THROWS_AS(load_returns("/nonexistent/file.csv"), ParseError);
  }

  TEST_CASE("price levels become log returns") {
    const TempFile f("prices.csv");
    f.write("price\n100\n101\n105\n");
    LoadOptions opt;
    opt.prices = true;
    const ReturnSeries pct = load_returns(f.str(), opt);
    CHECK(pct.from_prices);
    REQUIRE(pct.values.size() == 2u);
    CHECK(pct.values[0] == doctest::Approx(0.9950330853167877).epsilon(1e-13));
    CHECK(pct.values[1] == doctest::Approx(3.8839833316263395).epsilon(1e-13));

    opt.scale_percent = false;
    const ReturnSeries raw = load_returns(f.str(), opt);
    CHECK(raw.values[0] == doctest::Approx(0.009950330853167877).epsilon(1e-13));

    f.write("price\n100\n-5\n");
    CHECK_THROWS_WITH_AS(load_returns(f.str(), opt), doctest::Contains("row 3"), ParseError);
    f.write("price\n100\n");
    CHECK_THROWS_AS(load_returns(f.str(), opt), DegenerateSeries);
  }

  TEST_CASE("saved returns read back exactly") {
    const TempFile f("roundtrip.csv");
    const std::vector<double> values{1.0 / 3.0, -2.5e-17, 0.0, 123456.789012345678};
    save_returns_csv(f.str(), values);
    CHECK(load_returns(f.str()).values == values);
  }

  TEST_CASE("sample matrices round-trip with their column names") {
    const TempFile f("samples.csv");
    Eigen::MatrixXd m(3, 2);
    m << 1.0 / 3.0, -7.25, 1e-17, 2.5e300, 0.0, -42.0;
    save_samples_csv(f.str(), m, {"omega", "alpha"});
    std::vector<std::string> names;
    const Eigen::MatrixXd back = load_samples_csv(f.str(), &names);
    CHECK(names == std::vector<std::string>{"omega", "alpha"});
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 2);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(save_samples_csv(f.str(), m, {"only_one"}), DimensionMismatch);
    const TempFile g("ragged.csv");
    g.write("a,b\n1.0,2.0\n3.0\n");
    CHECK_THROWS_WITH_AS(load_samples_csv(g.str()), doctest::Contains("row 3"), ParseError);
    g.write("a,b\n1.0,x\n");
    CHECK_THROWS_AS(load_samples_csv(g.str()), ParseError);
    g.write("");
    CHECK_THROWS_AS(load_samples_csv(g.str()), ParseError);
  }

  TEST_CASE("fit documents round-trip exactly") {
    FitDocument doc;
    doc.kind = InnovationKind::StudentT;
    doc.method = Method::Reparameterization;
    doc.seed = 16045690984833335486ull;
    Eigen::VectorXd mu(4);
    mu << -2.302585092994046, 2.944438979166440, -1.321755839982319, 1.854586542131141;
    doc.state = make_state(mu, 0.1, Factorization::Covariance, DiagParam::Free);
    doc.state.chol(2, 0) = -0.034567891234567895;
    doc.state.chol(3, 1) = 1e-9;
    doc.elbo_trace = {-1500.25, -1480.0, -1475.3333333333333};
    doc.iterations = 3;
    doc.stopped_by = StopReason::Patience;
    doc.final_window_elbo = -1478.5277777777778;

    const TempFile f("fit.json");
    save_fit_document(f.str(), doc);
    const FitDocument back = load_fit_document(f.str());
    CHECK(back.schema_version == 1);
    CHECK(back.kind == InnovationKind::StudentT);
    CHECK(back.method == Method::Reparameterization);
    CHECK(back.seed == doc.seed);
    CHECK(back.state.factorization == Factorization::Covariance);
    CHECK(back.state.diag_param == DiagParam::Free);
    CHECK((back.state.mu - doc.state.mu).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.state.chol - doc.state.chol).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.elbo_trace == doc.elbo_trace);
    CHECK(back.iterations == 3);
    CHECK(back.stopped_by == StopReason::Patience);
    CHECK(back.final_window_elbo == doc.final_window_elbo);

    // saving twice yields byte-identical files (no timestamps inside)
    const TempFile g("fit2.json");
    save_fit_document(g.str(), doc);
    std::ifstream a(f.str()), b(g.str());
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }

  TEST_CASE("fit document corruption is reported as a parse error") {
    const TempFile f("corrupt.json");
    f.write("{ not json");
    CHECK_THROWS_AS(load_fit_document(f.str()), ParseError);
    f.write("{}");
    CHECK_THROWS_AS(load_fit_document(f.str()), ParseError);

    FitDocument doc;
    doc.kind = InnovationKind::Gaussian;
    doc.state = make_state(Eigen::VectorXd::Zero(3), 0.1, Factorization::Precision,
                           DiagParam::LogScale);
    save_fit_document(f.str(), doc);
    // patch fields one at a time and expect rejection
    std::ifstream in(f.str());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    auto patched = [&](const std::string& from, const std::string& to) {
      std::string t = text;
      t.replace(t.find(from), from.size(), to);
      const TempFile p("patched.json");
      p.write(t);
      return load_fit_document(p.str());
    };
    CHECK_THROWS_AS(patched("\"schema_version\": 1", "\"schema_version\": 2"), ParseError);
    CHECK_THROWS_AS(patched("\"model\": \"gaussian\"", "\"model\": \"skewt\""), ParseError);
    CHECK_THROWS_AS(patched("\"precision\"", "\"cholesky\""), ParseError);
    CHECK_THROWS_AS(patched("\"stopped_by\": \"max_iterations\"", "\"stopped_by\": \"bored\""),
                    ParseError);
  }

  TEST_CASE("fit documents capture fit results") {
    FitResult fit;
    fit.state = make_state(Eigen::VectorXd::Zero(3), 0.2, Factorization::Precision,
                           DiagParam::LogScale);
    fit.elbo_trace = {-10.0, -9.0};
    fit.iterations = 2;
    fit.stopped_by = StopReason::MaxIterations;
    fit.final_window_elbo = -9.5;
    fit.wall_seconds = 123.0;  // deliberately not serialized
    const FitDocument doc =
        make_fit_document(fit, InnovationKind::Gaussian, Method::MeanField, 77);
    CHECK(doc.kind == InnovationKind::Gaussian);
    CHECK(doc.method == Method::MeanField);
    CHECK(doc.seed == 77);
    CHECK(doc.iterations == 2);
    CHECK(doc.elbo_trace == fit.elbo_trace);
    CHECK(doc.final_window_elbo == -9.5);
  }

  TEST_CASE("enum names used on disk") {
    CHECK(to_string(StopReason::Patience) == "patience");
    CHECK(to_string(StopReason::MaxIterations) == "max_iterations");
    CHECK(to_string(Factorization::Precision) == "precision");
    CHECK(to_string(Factorization::Covariance) == "covariance");
    CHECK(to_string(DiagParam::LogScale) == "log_scale");
    CHECK(to_string(DiagParam::Free) == "free");
  }
}
