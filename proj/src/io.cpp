#include "apent/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace apent::io {

namespace {

// Re-throws nlohmann's access errors as spec errors with context.
template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw apent::InvalidSpecError(std::string("malformed ") + what + ": " +
                                  e.what());
  }
}

}  // namespace

json complex_to_json(const std::complex<double>& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

std::complex<double> complex_from_json(const json& j) {
  return guarded("complex number", [&] {
    return std::complex<double>(j.at("re").get<double>(),
                                j.at("im").get<double>());
  });
}

json word_to_json(const freegroup::Word& w) { return json(w.letters()); }

freegroup::Word word_from_json(const json& j, int rank) {
  return guarded("word", [&] {
    std::vector<int> letters = j.get<std::vector<int>>();
    return freegroup::Word(rank, letters);
  });
}

json matrix_to_json(const matent::Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(complex_to_json(m(i, j)));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

matent::Matrix matrix_from_json(const json& j) {
  return guarded("matrix", [&] {
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 ||
        static_cast<int>(data.size()) != rows * cols) {
      throw apent::InvalidSpecError("matrix data length does not match shape");
    }
    matent::Matrix m(rows, cols);
    int pos = 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[pos++]);
    }
    return m;
  });
}

json flat_matrix_to_json(const matent::Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(complex_to_json(m(i, j)));
    }
  }
  return data;
}

matent::Matrix flat_matrix_from_json(const json& j, int k) {
  return guarded("matrix", [&] {
    if (static_cast<int>(j.size()) != k * k) {
      throw apent::InvalidSpecError("expected " + std::to_string(k * k) +
                                    " entries in a flat matrix");
    }
    matent::Matrix m(k, k);
    int pos = 0;
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) m(r, c) = complex_from_json(j[pos++]);
    }
    return m;
  });
}

json element_to_json(const groupalg::GroupAlgebraElement& a) {
  json out = json::array();
  for (const auto& [g, coeff] : a.coeffs()) {
    out.push_back(json{{"word", word_to_json(g)},
                       {"re", coeff.real()},
                       {"im", coeff.imag()}});
  }
  return out;
}

groupalg::GroupAlgebraElement element_from_json(const json& j, int rank) {
  return guarded("group algebra element", [&] {
    groupalg::GroupAlgebraElement out(rank);
    for (const json& term : j) {
      out.accumulate(word_from_json(term.at("word"), rank),
                     {term.at("re").get<double>(),
                      term.at("im").get<double>()});
    }
    return out;
  });
}

json pdf_spec_to_json(const pdf::PdfSpec& spec) {
  using Kind = pdf::PdfSpec::Kind;
  switch (spec.kind()) {
    case Kind::Regular:
      return json{{"kind", "regular"}, {"rank", spec.rank()}, {"k", spec.k()}};
    case Kind::Haagerup: {
      json params = json::array();
      for (const auto& a : spec.haagerup_params()) {
        params.push_back(complex_to_json(a));
      }
      return json{{"kind", "haagerup"},
                  {"rank", spec.rank()},
                  {"k", 1},
                  {"params", params}};
    }
    case Kind::Mollified:
      return json{{"kind", "mollified"},
                  {"t", spec.mollify_t()},
                  {"base", pdf_spec_to_json(spec.mollify_base())}};
    case Kind::Induced:
      return json{{"kind", "induced"},
                  {"rank", spec.rank()},
                  {"element", element_to_json(spec.induced_element())}};
    case Kind::DiagonalJoin: {
      json parts = json::array();
      for (const auto& part : spec.join_parts()) {
        parts.push_back(pdf_spec_to_json(part));
      }
      return json{{"kind", "diag"}, {"parts", parts}};
    }
    case Kind::Explicit: {
      json values = json::array();
      for (const auto& [letters, m] : spec.explicit_values()) {
        values.push_back(json{{"word", json(letters)},
                              {"matrix", flat_matrix_to_json(m)}});
      }
      return json{{"kind", "explicit"},
                  {"rank", spec.rank()},
                  {"k", spec.k()},
                  {"radius", spec.explicit_radius()},
                  {"values", values}};
    }
  }
  throw apent::ConsistencyError("unreachable spec kind");
}

pdf::PdfSpec pdf_spec_from_json(const json& j) {
  return guarded("PDF spec", [&]() -> pdf::PdfSpec {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "regular") {
      return pdf::PdfSpec::regular(j.at("rank").get<int>(),
                                   j.value("k", 1));
    }
    if (kind == "haagerup") {
      int rank = j.at("rank").get<int>();
      std::vector<groupalg::Complex> params;
      for (const json& p : j.at("params")) {
        params.push_back(complex_from_json(p));
      }
      return pdf::PdfSpec::haagerup(rank, std::move(params));
    }
    if (kind == "mollified") {
      return pdf::PdfSpec::mollified(pdf_spec_from_json(j.at("base")),
                                     j.at("t").get<double>());
    }
    if (kind == "induced") {
      const json& element = j.at("element");
      int rank = 1;
      if (j.contains("rank")) {
        rank = j.at("rank").get<int>();
      } else {
        // Not recorded: use the smallest rank the support letters allow.
        for (const json& term : element) {
          for (const json& letter : term.at("word")) {
            rank = std::max(rank, std::abs(letter.get<int>()));
          }
        }
      }
      return pdf::PdfSpec::induced(element_from_json(element, rank));
    }
    if (kind == "diag") {
      std::vector<pdf::PdfSpec> parts;
      for (const json& part : j.at("parts")) {
        parts.push_back(pdf_spec_from_json(part));
      }
      return pdf::PdfSpec::diagonal_join(std::move(parts));
    }
    if (kind == "explicit") {
      int rank = j.at("rank").get<int>();
      int k = j.at("k").get<int>();
      int radius = j.at("radius").get<int>();
      std::vector<std::pair<freegroup::Word, matent::Matrix>> values;
      for (const json& entry : j.at("values")) {
        values.emplace_back(word_from_json(entry.at("word"), rank),
                            flat_matrix_from_json(entry.at("matrix"), k));
      }
      return pdf::PdfSpec::explicit_table(rank, k, radius, values);
    }
    throw apent::InvalidSpecError("unknown spec kind \"" + kind + "\"");
  });
}

json letter_order_to_json(const freegroup::LetterOrder& order) {
  return json(order.sequence());
}

freegroup::LetterOrder letter_order_from_json(const json& j, int rank) {
  return guarded("letter order", [&] {
    std::vector<int> seq = j.get<std::vector<int>>();
    return freegroup::LetterOrder::from_sequence(rank, seq);
  });
}

json coefficient_sequence_to_json(
    const std::vector<matent::Contraction>& coeffs,
    const freegroup::LetterOrder& order) {
  json list = json::array();
  for (const matent::Contraction& c : coeffs) {
    list.push_back(matrix_to_json(c.entries()));
  }
  return json{{"letter_order", letter_order_to_json(order)},
              {"coefficients", std::move(list)}};
}

std::pair<freegroup::LetterOrder, std::vector<matent::Contraction>>
coefficient_sequence_from_json(const json& j) {
  return guarded("coefficient sequence", [&] {
    const json& seq = j.at("letter_order");
    const int rank = static_cast<int>(seq.size()) / 2;
    freegroup::LetterOrder order = letter_order_from_json(seq, rank);
    std::vector<matent::Contraction> coeffs;
    for (const json& entry : j.at("coefficients")) {
      coeffs.emplace_back(matrix_from_json(entry));
    }
    return std::make_pair(std::move(order), std::move(coeffs));
  });
}

json extended_real_to_json(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return json("-inf");
  if (x == std::numeric_limits<double>::infinity()) return json("inf");
  return json(x);
}

double extended_real_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw apent::InvalidSpecError("unrecognized extended real \"" + s + "\"");
  }
  return guarded("extended real", [&] { return j.get<double>(); });
}

json entropy_report_to_json(const entropy::EntropyReport& rep) {
  json terms = json::array(), sums = json::array();
  for (double t : rep.terms) terms.push_back(extended_real_to_json(t));
  for (double e : rep.estimates) sums.push_back(extended_real_to_json(e));
  json out{{"method", entropy::method_name(rep.method)},
           {"note", rep.note},
           {"levels", rep.levels},
           {"terms", std::move(terms)},
           {"partial_sums", std::move(sums)},
           {"estimate", extended_real_to_json(rep.estimate)},
           {"stabilized", rep.stabilized},
           {"last_increment", rep.last_increment},
           {"levels_computed", rep.levels_computed}};
  out["first_singular_level"] = rep.first_singular_level.has_value()
                                    ? json(*rep.first_singular_level)
                                    : json(nullptr);
  if (!rep.word_lengths.empty()) out["word_lengths"] = rep.word_lengths;
  return out;
}

std::string entropy_report_to_csv(const entropy::EntropyReport& rep) {
  std::string out = "level,term,partial_sum\n";
  auto cell = [](double x) {
    if (x == -std::numeric_limits<double>::infinity()) return std::string("-inf");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    out += std::to_string(rep.levels[i]) + "," + cell(rep.terms[i]) + "," +
           cell(rep.estimates[i]) + "\n";
  }
  return out;
}

json sample_report_to_json(const randrep::SampleReport& rep) {
  return json{{"test", rep.test},
              {"n", rep.n},
              {"samples", rep.samples},
              {"seed", rep.seed},
              {"statistics", rep.statistics},
              {"threshold", rep.threshold},
              {"pass", rep.pass}};
}

std::string sample_dump_to_csv(const randrep::SampleReport& rep) {
  std::string out;
  std::size_t rows = 0;
  for (const auto& [name, column] : rep.dump) {
    if (!out.empty()) out += ",";
    out += name;
    rows = std::max(rows, column.size());
  }
  out += "\n";
  char buf[32];
  for (std::size_t i = 0; i < rows; ++i) {
    std::string line;
    for (const auto& [name, column] : rep.dump) {
      if (!line.empty()) line += ",";
      if (i < column.size()) {
        std::snprintf(buf, sizeof(buf), "%.17g", column[i]);
        line += buf;
      }
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace apent::io
