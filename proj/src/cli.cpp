#include "qfa/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qfa/acceptance.hpp"
#include "qfa/errors.hpp"
#include "qfa/fusion.hpp"
#include "qfa/linalg.hpp"

namespace qfa::cli {

namespace {

struct SessionConfig {
  std::string cartan;
  int height = 4;
  int root_order = 0;  // 0 = minimal
  std::string format = "text";
};

RationalVector parse_rationals(const std::string& text, int expected_rank, const char* what) {
  std::vector<Rational> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) values.push_back(Rational::parse(cell));
  if (expected_rank > 0 && static_cast<int>(values.size()) != expected_rank)
    throw DomainError(std::string(what) + ": expected " + std::to_string(expected_rank) +
                      " comma-separated rationals, got '" + text + "'");
  RationalVector v(static_cast<int>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) v(static_cast<int>(i)) = values[i];
  return v;
}

RootVec parse_beta(const std::string& text, int rank) {
  // "n a" shorthand for rank one: "2a" means 2*alpha.
  if (rank == 1 && !text.empty() && (text.back() == 'a' || text.back() == 'A')) {
    int n = std::stoi(text.substr(0, text.size() - 1));
    return RootVec{n};
  }
  RootVec beta;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) beta.push_back(std::stoi(cell));
  if (static_cast<int>(beta.size()) != rank)
    throw DomainError("beta: expected " + std::to_string(rank) + " coordinates, got '" + text + "'");
  return beta;
}

// Function-element literal: sum of [R*]c(phi,vec) terms with rational R.
FunctionElement parse_function_element(const CarrierRegistry& reg, const Carrier& carrier,
                                       const std::string& text) {
  FunctionElement out(&carrier);
  size_t pos = 0;
  auto skip_ws = [&]() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) throw DomainError("function element: empty literal");
  bool negate = false;
  if (text[pos] == '-') {
    negate = true;
    ++pos;
  } else if (text[pos] == '+') {
    ++pos;
  }
  while (true) {
    skip_ws();
    Rational coeff(1);
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      }
      coeff = Rational::parse(text.substr(start, pos - start));
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
      }
    }
    if (pos >= text.size() || text[pos] != 'c')
      throw DomainError("function element: expected c(phi,vec) at offset " + std::to_string(pos));
    ++pos;
    skip_ws();
    if (pos >= text.size() || (text[pos] != '(' && text[pos] != '['))
      throw DomainError("function element: expected '(' after c");
    char close = text[pos] == '(' ? ')' : ']';
    ++pos;
    size_t end = text.find(close, pos);
    if (end == std::string::npos) throw DomainError("function element: unbalanced atom");
    std::string inner = text.substr(pos, end - pos);
    pos = end + 1;
    size_t comma = inner.find(',');
    if (comma == std::string::npos) throw DomainError("function element: atom needs two indices");
    int phi = std::stoi(inner.substr(0, comma));
    int vec = std::stoi(inner.substr(comma + 1));
    FunctionElement atom = reg.matrix_coefficient(carrier, phi, vec);
    if (negate) coeff = -coeff;
    out += atom.scaled(Scalar(coeff));
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == '+') {
      negate = false;
      ++pos;
    } else if (text[pos] == '-') {
      negate = true;
      ++pos;
    } else {
      throw DomainError("function element: expected '+' or '-' at offset " + std::to_string(pos));
    }
  }
  return out;
}

struct Printer {
  std::ostream& out;
  bool structured;

  void header(const Session& s, const std::string& type) {
    if (structured)
      out << "#qfa/1 type=" << type << " D=" << s.D() << " Dp=" << s.Dprime() << " height=" << s.height_bound()
          << "\n";
    else
      out << "type " << type << ", D = " << s.D() << ", D' = " << s.Dprime() << ", height bound "
          << s.height_bound() << "\n";
  }
};

void print_matrix(std::ostream& out, bool structured, const std::string& record, const ScalarMatrix& m) {
  if (structured) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) out << record << " i=" << i << " j=" << j << " " << m(i, j).str() << "\n";
  } else {
    for (int i = 0; i < m.rows(); ++i) {
      out << "  [";
      for (int j = 0; j < m.cols(); ++j) {
        if (j) out << ", ";
        out << m(i, j).str();
      }
      out << "]\n";
    }
  }
}

int cmd_gram(const SessionConfig& cfg, const std::string& weight, const std::string& direction,
             const std::string& beta_text, std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  const int rank = session.rank();
  Weight lambda = direction.empty()
                      ? session.weight(parse_rationals(weight, rank, "weight"))
                      : session.family_weight(parse_rationals(weight, rank, "weight"),
                                              parse_rationals(direction, rank, "direction"));
  RootVec beta = parse_beta(beta_text, rank);
  const GramBlock& block = shap.gram_block(lambda, beta);
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  Scalar det = determinant<Scalar>(block.matrix);
  if (p.structured) {
    out << "gram beta=" << root_str(beta) << " dim=" << block.dim() << " det=" << det.str() << "\n";
    print_matrix(out, true, "entry", block.matrix);
    for (size_t k = 0; k < block.kernel_basis.size(); ++k)
      for (int i = 0; i < block.kernel_basis[k].size(); ++i)
        out << "kernel k=" << k << " i=" << i << " " << block.kernel_basis[k](i).str() << "\n";
    out << "complement";
    for (int tag : block.complement_tags) out << " " << tag;
    out << "\n";
    print_matrix(out, true, "inv_quotient", block.inv_quotient);
  } else {
    out << "Gram block of S_lambda at lambda = " << lambda.str() << ", beta = (" << root_str(beta) << ")\n";
    print_matrix(out, false, "", block.matrix);
    out << "det = " << det.str() << "\n";
    out << "kernel dimension " << block.kernel_basis.size() << ", complement tags [";
    for (size_t i = 0; i < block.complement_tags.size(); ++i) {
      if (i) out << ", ";
      out << block.complement_tags[i];
    }
    out << "]\n";
  }
  return 0;
}

int cmd_kernel(const SessionConfig& cfg, const std::string& weight, const std::string& beta_text,
               std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  const int rank = session.rank();
  Weight lambda = session.weight(parse_rationals(weight, rank, "weight"));
  RootVec beta = parse_beta(beta_text, rank);
  auto kernel = shap.kernel_block(lambda, beta);
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  if (p.structured) {
    out << "kernel beta=" << root_str(beta) << " dim=" << kernel.size() << "\n";
    for (size_t k = 0; k < kernel.size(); ++k) out << "element k=" << k << " " << kernel[k].str() << "\n";
  } else {
    out << "K_lambda[-beta] at lambda = " << lambda.str() << ", beta = (" << root_str(beta) << ")\n";
    if (kernel.empty()) out << "  (zero)\n";
    for (const auto& y : kernel) out << "  " << y.str() << "\n";
  }
  return 0;
}

int cmd_module(const SessionConfig& cfg, const std::string& kind, const std::string& weight, bool matrices,
               std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  const int rank = session.rank();
  Weight lambda = session.weight(parse_rationals(weight, rank, "weight"));
  std::optional<WeightModule> m;
  if (kind == "verma")
    m = WeightModule::verma(shap, lambda, cfg.height);
  else if (kind == "irreducible")
    m = WeightModule::irreducible(shap, lambda, cfg.height);
  else if (kind == "finite")
    m = WeightModule::finite_dim(shap, lambda);
  else
    throw DomainError("module: unknown kind '" + kind + "' (use verma, irreducible or finite)");
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  if (p.structured) {
    out << "module kind=" << kind << " dim=" << m->dim() << " depth=" << m->depth() << "\n";
    for (const auto& layer : m->layers())
      out << "layer beta=" << root_str(layer.beta) << " dim=" << layer.tags.size() << "\n";
  } else {
    out << kind << " module at lambda = " << lambda.str() << ": dim " << m->dim() << ", depth " << m->depth()
        << "\n";
    for (const auto& layer : m->layers())
      out << "  layer (" << root_str(layer.beta) << "): dim " << layer.tags.size() << "\n";
  }
  if (matrices) {
    for (int i = 0; i < rank; ++i) {
      if (p.structured) {
        print_matrix(out, true, "f" + std::to_string(i + 1), m->mat_f(i));
        print_matrix(out, true, "e" + std::to_string(i + 1), m->mat_e(i));
      } else {
        out << "f_" << i + 1 << ":\n";
        print_matrix(out, false, "", m->mat_f(i));
        out << "e_" << i + 1 << ":\n";
        print_matrix(out, false, "", m->mat_e(i));
      }
    }
  }
  return 0;
}

void print_function_element(std::ostream& out, bool structured, const std::string& label,
                            const FunctionElement& f) {
  if (structured) {
    if (f.is_zero()) {
      out << label << " zero\n";
      return;
    }
    out << label << " carrier=" << f.carrier()->id() << "\n";
    for (const auto& [key, c] : f.atoms())
      out << label << " phi=" << key.first << " vec=" << key.second << " " << c.str() << "\n";
  } else {
    out << label << " = " << f.str();
    if (!f.is_zero()) out << "   on " << f.carrier()->id();
    out << "\n";
  }
}

int cmd_fn(const SessionConfig& cfg, const std::string& carrier_text, const std::string& lhs,
           const std::string& rhs, const std::string& apply, const std::string& coapply,
           const std::string& eval, bool multiply, std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  CarrierRegistry reg(shap);
  const int rank = session.rank();
  const Carrier& carrier = reg.finite_dim(session.weight(parse_rationals(carrier_text, rank, "carrier")));
  FunctionElement f = parse_function_element(reg, carrier, lhs);
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  print_function_element(out, p.structured, "lhs", f);
  if (!apply.empty()) {
    AlgebraElement a = session.parse_element(apply);
    print_function_element(out, p.structured, "arrow", f.arrow(a));
  }
  if (!coapply.empty()) {
    AlgebraElement a = session.parse_element(coapply);
    print_function_element(out, p.structured, "coarrow", f.coarrow(a));
  }
  if (!eval.empty()) {
    AlgebraElement x = session.parse_element(eval);
    Scalar value = f.evaluate(x);
    if (p.structured)
      out << "eval " << value.str() << "\n";
    else
      out << "lhs(" << eval << ") = " << value.str() << "\n";
  }
  if (multiply) {
    if (rhs.empty()) throw DomainError("fn --multiply needs --rhs");
    FunctionElement g = parse_function_element(reg, carrier, rhs);
    print_function_element(out, p.structured, "product", reg.product(f, g));
  }
  return 0;
}

int cmd_fusion(const SessionConfig& cfg, const std::string& weight, const std::string& direction, int n,
               std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  const int rank = session.rank();
  Printer p{out, cfg.format == "structured"};
  FusionElement j;
  if (direction.empty()) {
    Weight lambda = session.weight(parse_rationals(weight, rank, "weight"));
    j = fusion.fusion_reduced(lambda, n);
  } else {
    Weight lambda = session.family_weight(parse_rationals(weight, rank, "weight"),
                                          parse_rationals(direction, rank, "direction"));
    j = fusion.fusion_family(lambda, n);
  }
  p.header(session, cfg.cartan);
  for (const auto& [beta, block] : j.blocks) {
    if (p.structured) {
      out << "block beta=" << root_str(beta) << " dim=" << block.tags.size() << " tags=";
      for (size_t i = 0; i < block.tags.size(); ++i) {
        if (i) out << ",";
        out << block.tags[i];
      }
      out << "\n";
      print_matrix(out, true, "inv", block.inv);
    } else {
      out << "block (" << root_str(beta) << "): quotient dim " << block.tags.size() << "\n";
      print_matrix(out, false, "", block.inv);
    }
  }
  return 0;
}

int cmd_star(const SessionConfig& cfg, const std::string& weight, const std::string& carrier_text,
             const std::string& lhs, const std::string& rhs, std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  const int rank = session.rank();
  Weight lambda = session.weight(parse_rationals(weight, rank, "weight"));
  const Carrier& carrier = reg.finite_dim(session.weight(parse_rationals(carrier_text, rank, "carrier")));
  FunctionElement f1 = parse_function_element(reg, carrier, lhs);
  FunctionElement f2 = parse_function_element(reg, carrier, rhs);
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  FunctionElement result = fusion.star(lambda, f1, f2);
  print_function_element(out, p.structured, "star", result);
  return 0;
}

int cmd_probe(const SessionConfig& cfg, const std::string& weight, const std::string& direction,
              const std::string& carrier_text, bool kostant, std::ostream& out) {
  Session session(RootData::from_text(cfg.cartan), cfg.height, cfg.root_order);
  ShapovalovContext shap(session);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  const int rank = session.rank();
  Weight lambda = session.family_weight(parse_rationals(weight, rank, "weight"),
                                        parse_rationals(direction, rank, "direction"));
  const Carrier& carrier = reg.finite_dim(session.weight(parse_rationals(carrier_text, rank, "carrier")));
  Printer p{out, cfg.format == "structured"};
  p.header(session, cfg.cartan);
  if (kostant) {
    KostantReport report = fusion.kostant_probe(lambda, carrier);
    report.print(out);
    return report.all_pass() ? 0 : 1;
  }
  RegularityReport report = fusion.regularity_probe(lambda, carrier);
  report.print(out);
  return report.all_pass() ? 0 : 1;
}

int cmd_verify(const std::string& suite, const std::string& type_filter, std::ostream& out) {
  auto results = qfa::acceptance::run(suite, type_filter);
  if (results.empty()) {
    out << "no criteria matched suite '" << suite << "'\n";
    return 2;
  }
  bool all = true;
  for (const auto& r : results) {
    out << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.number << " " << r.suite << " " << r.name;
    if (!r.detail.empty()) out << " -- " << r.detail;
    out << "\n";
    all = all && r.pass;
  }
  out << (all ? "PASS" : "FAIL") << ": " << results.size() << " criteria\n";
  return all ? 0 : 1;
}

void load_config_file(const std::string& path, SessionConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "type")
      cfg.cartan = value;
    else if (key == "height")
      cfg.height = std::stoi(value);
    else if (key == "root_order")
      cfg.root_order = std::stoi(value);
    else if (key == "format")
      cfg.format = value;
    else
      throw DomainError("config: unknown key '" + key + "'");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computations in quantized enveloping algebras: Shapovalov forms, fusion elements, star products"};
  app.require_subcommand(1);

  std::string config_path;
  SessionConfig cfg;
  app.add_option("--config", config_path, "key=value configuration file (flags override it)");

  // Session options shared by the computing subcommands.
  auto add_session_options = [&cfg](CLI::App* sub) {
    sub->add_option("--type", cfg.cartan, "Cartan type shorthand (A2, B2, ...) or matrix rows '2,-1;-1,2'");
    sub->add_option("--height", cfg.height, "session height bound");
    sub->add_option("--root-order", cfg.root_order, "root order override (multiple of the minimal D)");
    sub->add_option("--format", cfg.format, "output format: text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  std::string weight, direction, beta, kind = "verma", carrier, lhs, rhs, apply, coapply, eval;
  std::string suite = "all", type_filter;
  bool matrices = false, multiply = false;
  int fusion_height = -1;

  CLI::App* gram = app.add_subcommand("gram", "Gram block of the Shapovalov form");
  add_session_options(gram);
  gram->add_option("--weight", weight, "weight in fundamental coordinates, e.g. 0,1/3")->required();
  gram->add_option("--direction", direction, "family direction nu (makes entries rational in z)");
  gram->add_option("--beta", beta, "degree in simple-root coordinates, e.g. 1,1 (rank 1: '2a')")->required();

  CLI::App* kernel = app.add_subcommand("kernel", "kernel of the Shapovalov form at one degree");
  add_session_options(kernel);
  kernel->add_option("--weight", weight)->required();
  kernel->add_option("--beta", beta)->required();

  CLI::App* module = app.add_subcommand("module", "layer dimensions and matrices of a module");
  add_session_options(module);
  module->add_option("--kind", kind, "verma, irreducible or finite");
  module->add_option("--weight", weight)->required();
  module->add_flag("--matrices", matrices, "print generator matrices");

  CLI::App* fn = app.add_subcommand("fn", "matrix coefficients: arrows, products, evaluation");
  add_session_options(fn);
  fn->add_option("--carrier", carrier, "dominant weight of the carrier module")->required();
  fn->add_option("--lhs", lhs, "function element, e.g. 'c(0,1) + 3/2*c(1,2)'")->required();
  fn->add_option("--rhs", rhs, "second function element (for --multiply)");
  fn->add_option("--apply", apply, "algebra element for the -> action, e.g. 'f1^2*t1^-1*e2'");
  fn->add_option("--coapply", coapply, "algebra element for the <- action");
  fn->add_option("--eval", eval, "algebra element to evaluate on");
  fn->add_flag("--multiply", multiply, "print lhs * rhs");

  CLI::App* fusion = app.add_subcommand("fusion", "reduced fusion element blocks");
  add_session_options(fusion);
  fusion->add_option("--weight", weight)->required();
  fusion->add_option("--direction", direction, "family direction (blocks over k(z))");
  fusion->add_option("--blocks-height", fusion_height, "truncation height (default: session height)");

  CLI::App* star = app.add_subcommand("star", "star product of invariant function elements");
  add_session_options(star);
  star->add_option("--weight", weight)->required();
  star->add_option("--carrier", carrier)->required();
  star->add_option("--lhs", lhs)->required();
  star->add_option("--rhs", rhs)->required();

  CLI::App* probe = app.add_subcommand("probe", "J-regularity probe along a weight family");
  add_session_options(probe);
  probe->add_option("--weight", weight)->required();
  probe->add_option("--direction", direction)->required();
  probe->add_option("--carrier", carrier)->required();

  CLI::App* kostant = app.add_subcommand("kostant", "Kostant lifting probe along a weight family");
  add_session_options(kostant);
  kostant->add_option("--weight", weight)->required();
  kostant->add_option("--direction", direction)->required();
  kostant->add_option("--carrier", carrier)->required();

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suites");
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--type", type_filter, "only run criteria whose type matches");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    // Config file first, then flags override.
    for (size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") load_config_file(args[i + 1], cfg);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gram->parsed()) return cmd_gram(cfg, weight, direction, beta, out);
    if (kernel->parsed()) return cmd_kernel(cfg, weight, beta, out);
    if (module->parsed()) return cmd_module(cfg, kind, weight, matrices, out);
    if (fn->parsed()) return cmd_fn(cfg, carrier, lhs, rhs, apply, coapply, eval, multiply, out);
    if (fusion->parsed())
      return cmd_fusion(cfg, weight, direction, fusion_height < 0 ? cfg.height : fusion_height, out);
    if (star->parsed()) return cmd_star(cfg, weight, carrier, lhs, rhs, out);
    if (probe->parsed()) return cmd_probe(cfg, weight, direction, carrier, false, out);
    if (kostant->parsed()) return cmd_probe(cfg, weight, direction, carrier, true, out);
    if (verify->parsed()) return cmd_verify(suite, type_filter, out);
  } catch (const HeightOverflow& e) {
    err << "error: " << e.what() << " (raise --height)\n";
    return 2;
  } catch (const PoleAtOne& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace qfa::cli
