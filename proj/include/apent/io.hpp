#pragma once

#include <complex>
#include <json.hpp>

#include "apent/entropy.hpp"
#include "apent/freegroup.hpp"
#include "apent/groupalg.hpp"
#include "apent/matent.hpp"
#include "apent/pdf.hpp"
#include "apent/randrep.hpp"

namespace apent::io {

using nlohmann::json;

// Complex numbers serialize as {"re": x, "im": y}.
json complex_to_json(const std::complex<double>& z);
std::complex<double> complex_from_json(const json& j);

// Words serialize as arrays of signed generator indices.
json word_to_json(const freegroup::Word& w);
freegroup::Word word_from_json(const json& j, int rank);

// Standalone matrices carry shape: {"rows": r, "cols": c, "data": [...]}
// with row-major complex entries.
json matrix_to_json(const matent::Matrix& m);
matent::Matrix matrix_from_json(const json& j);

// Square k x k matrices embedded in PDF tables are flat row-major arrays.
json flat_matrix_to_json(const matent::Matrix& m);
matent::Matrix flat_matrix_from_json(const json& j, int k);

// Group-algebra elements: [{"word": [...], "re": x, "im": y}, ...].
json element_to_json(const groupalg::GroupAlgebraElement& a);
groupalg::GroupAlgebraElement element_from_json(const json& j, int rank);

// PDF spec (de)serialization; throws InvalidSpecError on malformed input.
json pdf_spec_to_json(const pdf::PdfSpec& spec);
pdf::PdfSpec pdf_spec_from_json(const json& j);

// Letter orders serialize as the letter sequence, smallest first.
json letter_order_to_json(const freegroup::LetterOrder& order);
freegroup::LetterOrder letter_order_from_json(const json& j, int rank);

// Verblunsky coefficient sequences carry their letter order so the
// enumeration they parametrize can be rebuilt:
// {"letter_order": [...], "coefficients": [matrix, ...]}.
json coefficient_sequence_to_json(
    const std::vector<matent::Contraction>& coeffs,
    const freegroup::LetterOrder& order);
std::pair<freegroup::LetterOrder, std::vector<matent::Contraction>>
coefficient_sequence_from_json(const json& j);

// -infinity must survive a JSON roundtrip; it is encoded as the string
// "-inf", finite values as numbers.
json extended_real_to_json(double x);
double extended_real_from_json(const json& j);

// Entropy runs serialize fully to JSON, or to CSV rows of
// level,term,partial_sum for spreadsheet use.
json entropy_report_to_json(const entropy::EntropyReport& rep);
std::string entropy_report_to_csv(const entropy::EntropyReport& rep);

// Statistical check reports serialize to JSON; the dump columns, when
// present, become a CSV table with one column per sample series.
json sample_report_to_json(const randrep::SampleReport& rep);
std::string sample_dump_to_csv(const randrep::SampleReport& rep);

}  // namespace apent::io
