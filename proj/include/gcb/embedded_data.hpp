#pragma once

#include <string_view>

namespace gcb::embedded {

// Contents of the checked-in data files, compiled in at configure time.
extern const std::string_view iscc_l2_csv;
extern const std::string_view iscc_l3_csv;
extern const std::string_view css3x11_csv;
extern const std::string_view objects_tsv;
extern const std::string_view templates_tsv;

}  // namespace gcb::embedded
