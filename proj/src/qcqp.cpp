#include "fgld/qcqp.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "fgld/errors.hpp"
#include "fgld/numeric_text.hpp"

namespace fgld {

std::string variable_name(std::size_t voter, std::size_t candidate) {
  return "x_" + std::to_string(voter) + "_" + std::to_string(candidate);
}

namespace {

std::string literal(double value) {
  std::string text = format_decimal(value);
  if (text.find('.') == std::string::npos) {
    text += ".0";
  }
  return text;
}

std::string sum_of(std::size_t voter, const std::vector<std::size_t>& candidates) {
  if (candidates.size() == 1) {
    return variable_name(voter, candidates.front());
  }
  std::string out = "(+";
  for (std::size_t c : candidates) {
    out += " " + variable_name(voter, c);
  }
  return out + ")";
}

std::string conjunction(const std::vector<std::string>& terms) {
  if (terms.empty()) {
    return "true";
  }
  if (terms.size() == 1) {
    return terms.front();
  }
  std::string out = "(and";
  for (const auto& t : terms) {
    out += " " + t;
  }
  return out + ")";
}

std::vector<std::string> ratio_equalities(std::size_t v, const Bundle& b) {
  std::vector<std::string> out;
  const std::size_t d = b.delegate;
  for (std::size_t c1 : b.members) {
    for (std::size_t c2 : b.members) {
      if (c1 == c2) {
        continue;
      }
      out.push_back("(= (* " + variable_name(v, c1) + " " + variable_name(d, c2) + ") (* " +
                    variable_name(d, c1) + " " + variable_name(v, c2) + "))");
    }
  }
  return out;
}

double default_norm(const Bundle& b) {
  double sum = 0.0;
  for (double x : b.default_split) {
    sum += x;
  }
  return sum;
}

}  // namespace

ConstraintExport export_qcqp(const ElectionInstance& instance) {
  require_valid(instance);
  for (const auto& voter : instance.voters) {
    for (const auto& b : voter.bundles) {
      if (b.notion == Notion::kEPT) {
        throw UnsupportedNotionError("EP-T has no continuous constraint encoding; voter " +
                                     voter.id);
      }
    }
  }

  ConstraintExport out;
  std::ostringstream text;
  text << "; fgld constraint export, format 1\n";
  text << "; voters:";
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    text << ' ' << v << '=' << instance.voters[v].id;
  }
  text << "\n; candidates:";
  for (std::size_t c = 0; c < instance.num_candidates(); ++c) {
    text << ' ' << c << '=' << instance.candidates[c];
  }
  text << "\n(set-logic QF_NRA)\n";

  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (std::size_t c = 0; c < instance.num_candidates(); ++c) {
      text << "(declare-const " << variable_name(v, c) << " Real)\n";
    }
  }
  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    for (std::size_t c = 0; c < instance.num_candidates(); ++c) {
      const auto name = variable_name(v, c);
      text << "(assert (and (<= 0.0 " << name << ") (<= " << name << " 1.0)))\n";
      ++out.bounds;
    }
  }

  for (std::size_t v = 0; v < instance.num_voters(); ++v) {
    const Voter& voter = instance.voters[v];
    text << "; voter " << voter.id << "\n";
    std::vector<std::size_t> all(instance.num_candidates());
    for (std::size_t c = 0; c < all.size(); ++c) {
      all[c] = c;
    }
    text << "(assert (= " << sum_of(v, all) << " 1.0))\n";
    ++out.row_sums;

    for (const Bundle& b : voter.bundles) {
      text << "(assert (= " << sum_of(v, b.members) << ' ' << literal(b.budget) << "))\n";
      ++out.bundle_sums;
      const std::size_t d = b.delegate;
      const std::string budget = literal(b.budget);

      switch (b.notion) {
        case Notion::kEP:
          for (const auto& eq : ratio_equalities(v, b)) {
            text << "(assert " << eq << ")\n";
            ++out.bilinear;
          }
          break;
        case Notion::kWCC: {
          // Divided through by |d| + w so the multiplier of x stays at most 1.
          const double scale = default_norm(b) + *b.weight;
          const std::string weight = literal(*b.weight / scale);
          const std::string norm = "(+ " + literal(default_norm(b) / scale) + " (* " + weight +
                                   ' ' + sum_of(d, b.members) + "))";
          for (std::size_t i = 0; i < b.members.size(); ++i) {
            const std::size_t c = b.members[i];
            text << "(assert (= (* " << variable_name(v, c) << ' ' << norm << ") (* (+ "
                 << literal(b.default_split[i] / scale) << " (* " << weight << ' '
                 << variable_name(d, c) << ")) " << budget << ")))\n";
            ++out.combination;
          }
          break;
        }
        case Notion::kEPTI: {
          const std::string support = sum_of(d, b.members);
          const std::string threshold = literal(b.threshold());
          const std::string gap = "(- " + threshold + ' ' + support + ")";
          text << "(assert (=> (>= " << support << ' ' << threshold << ") "
               << conjunction(ratio_equalities(v, b)) << "))\n";
          std::vector<std::string> interpolation;
          // Thresholds above 1 are divided out for the same reason.
          const double scale = std::max(1.0, b.threshold());
          const std::string factor = scale > 1.0 ? literal(1.0 / scale) + " " : "";
          const std::string scaled_budget = literal(b.budget / scale);
          const std::string norm =
              "(+ " + support + " (* " + gap + ' ' + literal(default_norm(b)) + "))";
          for (std::size_t i = 0; i < b.members.size(); ++i) {
            const std::size_t c = b.members[i];
            interpolation.push_back("(= (* " + factor + variable_name(v, c) + ' ' + norm +
                                    ") (* (+ " + variable_name(d, c) + " (* " + gap + ' ' +
                                    literal(b.default_split[i]) + ")) " + scaled_budget + "))");
          }
          text << "(assert (=> (< " << support << ' ' << threshold << ") "
               << conjunction(interpolation) << "))\n";
          out.implications += 2;
          break;
        }
        case Notion::kDirect:
        case Notion::kEPT:
          break;
      }
    }
  }
  text << "(check-sat)\n";
  out.text = text.str();
  return out;
}

namespace {

struct Node {
  std::string atom;  // empty for lists
  std::vector<Node> items;
  bool is_list() const { return atom.empty(); }
};

std::string render(const Node& node) {
  if (!node.is_list()) {
    return node.atom;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < node.items.size(); ++i) {
    out += (i ? " " : "") + render(node.items[i]);
  }
  return out + ")";
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool next(Node& node) {
    skip();
    if (pos_ >= text_.size()) {
      return false;
    }
    node = read();
    return true;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Node read() {
    skip();
    if (pos_ >= text_.size()) {
      throw Error("constraint text ends inside an expression");
    }
    if (text_[pos_] == ')') {
      throw Error("unexpected ')' at offset " + std::to_string(pos_));
    }
    if (text_[pos_] == '(') {
      ++pos_;
      Node list;
      while (true) {
        skip();
        if (pos_ >= text_.size()) {
          throw Error("unbalanced '(' in constraint text");
        }
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    return Node{std::string(text_.substr(start, pos_ - start)), {}};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Evaluator {
 public:
  Evaluator(const SolutionMatrix& x, double tolerance) : x_(x), tolerance_(tolerance) {}

  void declare(const Node& form) {
    if (form.items.size() != 3 || form.items[1].is_list() || form.items[2].atom != "Real") {
      throw Error("malformed declaration " + render(form));
    }
    const std::string& name = form.items[1].atom;
    std::size_t voter = 0;
    std::size_t candidate = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "x_%zu_%zu%c", &voter, &candidate, &tail) != 2 ||
        voter >= x_.rows() || candidate >= x_.cols()) {
      throw Error("variable " + name + " does not name a matrix entry");
    }
    values_[name] = x_(voter, candidate);
  }

  double number(const Node& node) const {
    if (!node.is_list()) {
      if (auto it = values_.find(node.atom); it != values_.end()) {
        return it->second;
      }
      if (auto value = parse_exact_number(node.atom)) {
        return *value;
      }
      throw Error("undeclared symbol " + node.atom);
    }
    const std::string& op = head(node);
    std::vector<double> args;
    for (std::size_t i = 1; i < node.items.size(); ++i) {
      args.push_back(number(node.items[i]));
    }
    if (op == "+" && !args.empty()) {
      double sum = 0.0;
      for (double a : args) sum += a;
      return sum;
    }
    if (op == "*" && !args.empty()) {
      double product = 1.0;
      for (double a : args) product *= a;
      return product;
    }
    if (op == "-" && args.size() == 1) return -args[0];
    if (op == "-" && args.size() == 2) return args[0] - args[1];
    if (op == "/" && args.size() == 2) return args[0] / args[1];
    throw Error("unsupported numeric form " + render(node));
  }

  bool truth(const Node& node, bool tolerant) const {
    if (!node.is_list()) {
      if (node.atom == "true") return true;
      if (node.atom == "false") return false;
      throw Error("expected a boolean, got " + node.atom);
    }
    const std::string& op = head(node);
    const double tol = tolerant ? tolerance_ : 0.0;
    if (op == "and" || op == "or") {
      bool any = false;
      bool all = true;
      for (std::size_t i = 1; i < node.items.size(); ++i) {
        const bool value = truth(node.items[i], tolerant);
        any = any || value;
        all = all && value;
      }
      return op == "and" ? all : any;
    }
    if (op == "not" && node.items.size() == 2) {
      return !truth(node.items[1], tolerant);
    }
    if (op == "=>" && node.items.size() == 3) {
      return !truth(node.items[1], false) || truth(node.items[2], tolerant);
    }
    if (node.items.size() < 3) {
      throw Error("unsupported boolean form " + render(node));
    }
    // Chained comparisons hold pairwise.
    for (std::size_t i = 1; i + 1 < node.items.size(); ++i) {
      const double a = number(node.items[i]);
      const double b = number(node.items[i + 1]);
      bool holds = false;
      if (op == "=") {
        holds = std::abs(a - b) <= tol;
      } else if (op == "<=") {
        holds = a <= b + tol;
      } else if (op == ">=") {
        holds = a + tol >= b;
      } else if (op == "<") {
        holds = a < b + tol;
      } else if (op == ">") {
        holds = a + tol > b;
      } else {
        throw Error("unsupported boolean form " + render(node));
      }
      if (!holds) {
        return false;
      }
    }
    return true;
  }

  static const std::string& head(const Node& node) {
    if (node.items.empty() || node.items.front().is_list()) {
      throw Error("expression without an operator: " + render(node));
    }
    return node.items.front().atom;
  }

 private:
  const SolutionMatrix& x_;
  double tolerance_;
  std::map<std::string, double> values_;
};

}  // namespace

ConstraintCheck check_constraints(std::string_view text, const SolutionMatrix& x,
                                  double tolerance) {
  Reader reader(text);
  Evaluator evaluator(x, tolerance);
  ConstraintCheck check;
  Node form;
  while (reader.next(form)) {
    const std::string& command = Evaluator::head(form);
    if (command == "set-logic" || command == "check-sat") {
      continue;
    }
    if (command == "declare-const") {
      evaluator.declare(form);
    } else if (command == "assert" && form.items.size() == 2) {
      ++check.asserts;
      if (!evaluator.truth(form.items[1], true)) {
        check.failures.push_back(render(form));
      }
    } else {
      throw Error("unsupported command " + render(form));
    }
  }
  return check;
}

}  // namespace fgld
