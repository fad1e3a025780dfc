#include "covbound/inequalities.hpp"

#include "covbound/combinatorics.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace covbound {

std::string_view to_string(InequalityProvenance p) {
  switch (p) {
    case InequalityProvenance::sphereCovering: return "sphereCovering";
    case InequalityProvenance::vanWee: return "vanWee";
    case InequalityProvenance::ceilStrengthened: return "ceilStrengthened";
    case InequalityProvenance::custom: return "custom";
  }
  return "custom";
}

InequalitySet::InequalitySet(std::vector<Rational> lambdas, Rational beta,
                             InequalityProvenance provenance)
    : lambdas_(std::move(lambdas)), beta_(std::move(beta)), provenance_(provenance) {
  if (lambdas_.empty()) throw std::invalid_argument("inequality needs at least one lambda");
  for (auto& l : lambdas_) {
    l.canonicalize();
    if (l < 0) throw std::invalid_argument("inequality lambdas must be nonnegative");
  }
  beta_.canonicalize();
  if (beta_ <= 0) throw std::invalid_argument("inequality beta must be positive");
  name_ = std::string(to_string(provenance_));
}

InequalitySet sphere_covering(int q, int n, int r) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (r < 0 || r > n) throw std::invalid_argument("sphere covering requires 0 <= r <= n");
  std::vector<Rational> lambdas(static_cast<std::size_t>(n + 1), Rational(0));
  for (int i = 0; i <= r; ++i) lambdas[static_cast<std::size_t>(i)] = 1;
  InequalitySet s(std::move(lambdas), Rational(1), InequalityProvenance::sphereCovering);
  s.set_name("sphere(r=" + std::to_string(r) + ")");
  return s;
}

InequalitySet van_wee(int n, int r) {
  if (r < 0 || r >= n) throw std::invalid_argument("van Wee inequalities require 0 <= r < n");
  const int m = (n + 1 + r) / (r + 1);  // ceil((n+1)/(r+1))
  std::vector<Rational> lambdas(static_cast<std::size_t>(n + 1), Rational(0));
  for (int i = 0; i < r; ++i) lambdas[static_cast<std::size_t>(i)] = m;
  lambdas[static_cast<std::size_t>(r)] = 1;
  lambdas[static_cast<std::size_t>(r + 1)] = 1;
  InequalitySet s(std::move(lambdas), Rational(m), InequalityProvenance::vanWee);
  s.set_name("vanwee(r=" + std::to_string(r) + ")");
  return s;
}

InequalitySet ceil_strengthen(const InequalitySet& ineq) {
  std::vector<Rational> lambdas;
  lambdas.reserve(ineq.lambdas().size());
  for (const auto& l : ineq.lambdas()) lambdas.emplace_back(ceil(l));
  InequalitySet s(std::move(lambdas), Rational(ceil(ineq.beta())),
                  InequalityProvenance::ceilStrengthened);
  s.set_name("ceil(" + ineq.name() + ")");
  return s;
}

Rational plain_lower_bound(int q, int n, const InequalitySet& ineq) {
  if (ineq.length() != n) throw std::invalid_argument("inequality length does not match n");
  Rational denom = 0;
  for (int i = 0; i <= n; ++i) {
    denom += ineq.lambdas()[static_cast<std::size_t>(i)] * Rational(sphere_size(q, n, i));
  }
  if (denom == 0) throw std::domain_error("inequality has no weight on nonempty spheres");
  Rational out = ineq.beta() * Rational(ipow(q, static_cast<unsigned long>(n))) / denom;
  out.canonicalize();
  return out;
}

InequalityFile parse_inequality_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return;
    }
    throw std::invalid_argument(std::string("inequality file: missing ") + what);
  };

  next_line("'q n' header");
  int q = 0;
  int n = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> q >> n) || q < 2 || n < 1) {
      throw std::invalid_argument("inequality file: bad header '" + line + "'");
    }
  }
  next_line("beta line");
  Rational beta;
  {
    std::istringstream bs(line);
    std::string tok;
    bs >> tok;
    beta = parse_rational(tok);
  }
  next_line("lambda line");
  std::vector<Rational> lambdas;
  {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) lambdas.push_back(parse_rational(tok));
  }
  if (static_cast<int>(lambdas.size()) != n + 1) {
    throw std::invalid_argument("inequality file: expected " + std::to_string(n + 1) +
                                " lambdas, got " + std::to_string(lambdas.size()));
  }
  InequalitySet ineq(std::move(lambdas), beta, InequalityProvenance::custom);
  return InequalityFile{q, n, std::move(ineq)};
}

InequalityFile read_inequality_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open inequality file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto f = parse_inequality_text(buf.str());
  f.ineq.set_name("file:" + path.filename().string());
  return f;
}

std::string format_inequality_text(int q, const InequalitySet& ineq) {
  std::ostringstream os;
  os << q << ' ' << ineq.length() << '\n' << ineq.beta().get_str() << '\n';
  for (std::size_t i = 0; i < ineq.lambdas().size(); ++i) {
    if (i) os << ' ';
    os << ineq.lambdas()[i].get_str();
  }
  os << '\n';
  return os.str();
}

}  // namespace covbound
