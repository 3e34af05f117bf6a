// qet: command-line front end.
//
//   qet dilate IN OUT
//   qet regularize IN OUT --order N
//   qet synthesize POLY [OUT]
//   qet transform MATRIX (--coeffs FILE | --exp EPS | --inverse RE [IM] EPS)
//   qet verify UNITARY MATRIX --ancillas A --order K
//   qet demo inverse|exp|jordan
//
// MATRIX may be "random:D" for a seeded D x D contraction. Exit codes:
// 0 ok, 1 threshold exceeded, 2 input error, 3 norm violation, 4 numerical failure.
// Failures print one JSON object on stderr.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qet/qet.hpp"

namespace {

using qet::Complex;
using qet::ComplexMatrix;
using Json = qet::io::Json;

enum Exit { kOk = 0, kThreshold = 1, kInput = 2, kNorm = 3, kNumerical = 4 };

struct Globals {
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::size_t grid = 4096;
  std::string report;
};

int fail(int code, const std::string& kind, const std::string& module, const std::string& message,
         std::optional<double> norm = std::nullopt) {
  Json j;
  j["error"] = kind;
  j["exit"] = code;
  j["module"] = module;
  j["message"] = message;
  if (norm) j["norm"] = *norm;
  std::cerr << j.dump() << std::endl;
  return code;
}

void emit(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    qet::io::write_json_file(path, j);
  }
}

ComplexMatrix load_matrix(const std::string& spec, const Globals& g) {
  const std::string prefix = "random:";
  if (spec.rfind(prefix, 0) == 0) {
    std::size_t d = 0;
    try {
      d = std::stoul(spec.substr(prefix.size()));
    } catch (const std::exception&) {
      throw qet::DimensionError("bad matrix spec '" + spec + "', expected random:D");
    }
    if (d == 0) throw qet::DimensionError("random:D needs D >= 1");
    qet::Rng rng(g.seed);
    return qet::random_contraction(rng, d, 0.9);
  }
  return qet::io::read_matrix_file(spec);
}


Json report_to_json(const qet::TransformReport& r, double tolerance) {
  Json j;
  j["achieved_error"] = r.achieved_error;
  j["predicted_bound"] = r.predicted_bound;
  j["tolerance"] = tolerance;
  j["passed"] = r.achieved_error <= tolerance;
  j["degree"] = r.degree;
  j["order"] = r.order;
  j["block_encoding_calls"] = r.block_encoding_calls;
  j["total_ancillas"] = r.total_ancillas;
  j["counter_qubits"] = r.counter_qubits;
  j["source_ancillas"] = r.source_ancillas;
  j["circuit_dim"] = r.circuit_dim;
  j["encoding_scale"] = r.encoding_scale;
  j["matrix_scale"] = r.matrix_scale;
  j["synthesis_residual"] = r.synthesis_residual;
  j["encoding_error"] = r.encoding_error;
  j["result"] = qet::io::matrix_to_json(r.result_block);
  return j;
}

Json plan_to_json(const qet::analytic::TruncationPlan& plan) {
  Json j;
  j["function"] = qet::analytic::to_string(plan.function);
  j["order"] = plan.order;
  j["certified_error"] = plan.certified_error;
  return j;
}

qet::TransformOptions transform_options(const Globals& g, bool rescale) {
  qet::TransformOptions opt;
  opt.residual_grid = g.grid;
  opt.sup_grid = std::max(qet::gqsp::kDefaultSupGrid, g.grid);
  opt.rescale_matrix = rescale;
  return opt;
}

qet::BlockEncoding load_encoding(const Json& j, std::optional<std::size_t> ancillas) {
  const ComplexMatrix m = qet::io::matrix_from_json(j);
  if (!ancillas) {
    if (j.contains("ancillas")) {
      ancillas = j["ancillas"].get<std::size_t>();
    } else {
      throw qet::DimensionError("encoding file has no 'ancillas' field and --ancillas was not given");
    }
  }
  if (*ancillas >= 63) throw qet::DimensionError("ancilla count too large");
  const std::size_t block = std::size_t{1} << *ancillas;
  if (m.rows() % block != 0) {
    throw qet::DimensionError("unitary dimension " + std::to_string(m.rows()) +
                              " is not a multiple of 2^" + std::to_string(*ancillas));
  }
  return qet::BlockEncoding(m, *ancillas, m.rows() / block);
}

// -- commands ---------------------------------------------------------------

int cmd_dilate(const std::string& in, const std::string& out) {
  const ComplexMatrix a = qet::io::read_matrix_file(in);
  if (!a.is_square()) throw qet::DimensionError("dilate: matrix must be square, got " + a.shape());
  qet::io::write_json_file(out, qet::io::encoding_to_json(qet::dilate(a)));
  return kOk;
}

int cmd_regularize(const std::string& in, const std::string& out, std::size_t order) {
  const Json j = qet::io::read_json_file(in);
  const qet::BlockEncoding be = j.contains("ancillas") ? load_encoding(j, std::nullopt)
                                                       : qet::dilate(qet::io::matrix_from_json(j));
  const qet::RegularizedEncoding reg = qet::regularize(be, order);
  Json o = qet::io::encoding_to_json(reg.base);
  o["order"] = reg.order;
  o["counter_qubits"] = reg.counter_qubits;
  o["source_ancillas"] = reg.source_ancillas;
  qet::io::write_json_file(out, o);
  return kOk;
}

int cmd_synthesize(const std::string& in, const std::string& out, const Globals& g) {
  const qet::PolynomialSpec p = qet::io::polynomial_from_json(qet::io::read_json_file(in));
  const auto fitted = qet::gqsp::fit_to_unit_circle(p, qet::gqsp::kSynthesisMargin,
                                                    std::max(qet::gqsp::kDefaultSupGrid, g.grid));
  const auto seq = qet::gqsp::synthesize(fitted.polynomial);
  const double residual = qet::gqsp::synthesis_residual(seq, fitted.polynomial, g.grid);
  Json j = qet::io::sequence_to_json(seq);
  j["scale"] = fitted.scale;
  j["residual"] = residual;
  emit(j, out);
  return residual <= g.tolerance ? kOk : kThreshold;
}

struct PolySource {
  std::string coeffs;
  double exp_eps = 0.0;
  std::vector<double> inverse;  // re [im] eps
  bool rescale = false;
};

int cmd_transform(const std::string& matrix, const PolySource& src, const Globals& g) {
  const ComplexMatrix a = load_matrix(matrix, g);
  qet::PolynomialSpec p;
  std::optional<qet::analytic::TruncationPlan> plan;
  const int chosen = !src.coeffs.empty() + (src.exp_eps > 0.0) + !src.inverse.empty();
  if (chosen != 1) {
    throw qet::DimensionError("transform: give exactly one of --coeffs, --exp, --inverse");
  }
  if (!src.coeffs.empty()) {
    p = qet::io::polynomial_from_json(qet::io::read_json_file(src.coeffs));
  } else if (src.exp_eps > 0.0) {
    plan = qet::analytic::exp_plan(src.exp_eps);
  } else {
    if (src.inverse.size() != 2 && src.inverse.size() != 3) {
      throw qet::DimensionError("--inverse takes RE [IM] EPS");
    }
    const Complex c{src.inverse[0], src.inverse.size() == 3 ? src.inverse[1] : 0.0};
    plan = qet::analytic::shifted_inverse_plan(c, src.inverse.back());
  }
  if (plan) p = plan->coefficients;

  const qet::TransformReport r = qet::transform(a, p, transform_options(g, src.rescale));
  Json j = report_to_json(r, g.tolerance);
  if (plan) j["truncation"] = plan_to_json(*plan);
  emit(j, g.report);
  return r.achieved_error <= g.tolerance ? kOk : kThreshold;
}

int cmd_verify(const std::string& unitary, const std::string& matrix,
               std::optional<std::size_t> ancillas, std::size_t order, const Globals& g) {
  const qet::BlockEncoding be = load_encoding(qet::io::read_json_file(unitary), ancillas);
  const ComplexMatrix a = load_matrix(matrix, g);
  if (order == 0) throw qet::DimensionError("verify: --order must be positive");
  const std::vector<double> errors = qet::power_errors(be, a, order);
  for (std::size_t k = 0; k < errors.size(); ++k) {
    Json line;
    line["k"] = k;
    line["error"] = errors[k];
    std::cout << line.dump() << '\n';
  }
  std::size_t achieved = 0;
  try {
    achieved = qet::regularity_order(be, a, g.tolerance, order);
  } catch (const qet::EncodingMismatch&) {
    achieved = 0;
  }
  Json summary;
  summary["regularity_order"] = achieved;
  summary["required"] = order;
  summary["tolerance"] = g.tolerance;
  std::cout << summary.dump() << '\n';
  return achieved >= order ? kOk : kThreshold;
}

// Taylor series of e^A/3; terms shrink geometrically for ||A|| <= 1.
ComplexMatrix exp_over_three(const ComplexMatrix& a) {
  ComplexMatrix term = ComplexMatrix::identity(a.rows()) * Complex{1.0 / 3.0, 0.0};
  ComplexMatrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * a * Complex{1.0 / k, 0.0};
    sum = sum + term;
  }
  return sum;
}

int cmd_demo(const std::string& which, const Globals& g) {
  qet::Rng rng(g.seed);
  Json j;
  qet::TransformReport r;
  double function_error = 0.0;
  if (which == "inverse") {
    const ComplexMatrix a = qet::random_contraction(rng, 4, 0.9);
    const Complex c{2.0, 0.0};
    const auto plan = qet::analytic::shifted_inverse_plan(c, 1e-3);
    r = qet::transform(a, plan.coefficients, transform_options(g, false));
    const ComplexMatrix exact = qet::inverse(ComplexMatrix::identity(4) * c - a);
    function_error = qet::operator_norm(r.result_block - exact);
    j["truncation"] = plan_to_json(plan);
  } else if (which == "exp") {
    const ComplexMatrix a = qet::random_contraction(rng, 4, 0.9);
    const auto plan = qet::analytic::exp_plan(1e-10);
    r = qet::transform(a, plan.coefficients, transform_options(g, false));
    function_error = qet::operator_norm(r.result_block - exp_over_three(a));
    j["truncation"] = plan_to_json(plan);
  } else if (which == "jordan") {
    const Complex lambda{0.5, 0.0};
    const ComplexMatrix jb = qet::analytic::jordan_block(lambda, 3);
    const qet::PolynomialSpec p({0.0, 0.0, 0.0, 1.0});
    r = qet::transform(jb, p, transform_options(g, true));
    function_error = qet::operator_norm(r.result_block - qet::analytic::jordan_poly(p, lambda, 3));
  } else {
    throw qet::DimensionError("demo: unknown case '" + which + "', expected inverse, exp or jordan");
  }
  j["demo"] = which;
  j["function_error"] = function_error;
  j["report"] = report_to_json(r, g.tolerance);
  emit(j, g.report);
  return r.achieved_error <= g.tolerance ? kOk : kThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue transformation of square matrices through regular block-encodings"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tolerance", g.tolerance, "Error threshold for the exit status")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for random fixtures")->capture_default_str();
  app.add_option("--grid", g.grid, "Points on the unit circle for residual checks")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 22));
  app.add_option("--report", g.report, "Write the JSON report here instead of stdout");

  std::string in, out, matrix, which;
  std::size_t order = 2;
  std::optional<std::size_t> ancillas;
  PolySource src;

  auto* dilate = app.add_subcommand("dilate", "One-ancilla unitary dilation of a contraction");
  dilate->add_option("input", in)->required();
  dilate->add_option("output", out)->required();

  auto* regularize = app.add_subcommand("regularize", "Make an encoding n-regular");
  regularize->add_option("input", in, "Matrix or encoding file")->required();
  regularize->add_option("output", out)->required();
  regularize->add_option("--order", order, "Regularity order n (power of two)")->capture_default_str();

  auto* synthesize = app.add_subcommand("synthesize", "GQSP rotations for a polynomial");
  synthesize->add_option("input", in, "Polynomial file")->required();
  synthesize->add_option("output", out);

  auto* transform = app.add_subcommand("transform", "Block-encode P(A) and check it against Horner");
  transform->add_option("matrix", matrix, "Matrix file or random:D")->required();
  auto* coeffs = transform->add_option("--coeffs", src.coeffs, "Polynomial file");
  auto* exp = transform->add_option("--exp", src.exp_eps, "Truncated e^z/3 with this accuracy");
  auto* inv = transform->add_option("--inverse", src.inverse, "1/(c - z): RE [IM] EPS")->expected(2, 3);
  coeffs->excludes(exp)->excludes(inv);
  exp->excludes(inv);
  transform->add_flag("--rescale", src.rescale, "Accept ||A|| > 1 by encoding A/||A||");

  auto* verify = app.add_subcommand("verify", "Per-power encoding errors and regularity order");
  verify->add_option("unitary", in)->required();
  verify->add_option("matrix", matrix)->required();
  verify->add_option("--ancillas", ancillas);
  verify->add_option("--order", order)->capture_default_str();

  auto* demo = app.add_subcommand("demo", "Built-in worked examples");
  demo->add_option("case", which, "inverse, exp or jordan")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kInput, "input", "cli", e.what());
  }

  try {
    if (*dilate) return cmd_dilate(in, out);
    if (*regularize) return cmd_regularize(in, out, order);
    if (*synthesize) return cmd_synthesize(in, out, g);
    if (*transform) return cmd_transform(matrix, src, g);
    if (*verify) return cmd_verify(in, matrix, ancillas, order, g);
    if (*demo) return cmd_demo(which, g);
  } catch (const qet::NormError& e) {
    return fail(kNorm, "norm", "encoding", e.what(), e.norm());
  } catch (const qet::NumericalError& e) {
    return fail(kNumerical, "numerical", e.module(), e.what());
  } catch (const qet::EncodingMismatch& e) {
    return fail(kInput, "input", "encoding", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kInput, "input", "cli", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kInput, "input", "io", e.what());
  } catch (const std::exception& e) {
    return fail(kNumerical, "numerical", "unknown", e.what());
  }
  return kInput;
}
