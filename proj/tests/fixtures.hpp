#pragma once

#include "luandri/ingest.hpp"

#include <string_view>

namespace fixtures {

inline constexpr std::string_view kExampleQuery =
    "#syn( #od1(neural networks) #od1(deep learning)) #greater(year 2009)";

/// Three-document corpus: only A has an ordered phrase with year > 2009.
inline constexpr std::string_view kToyTrec =
    "<DOC><DOCNO>A</DOCNO><year>2010</year><TEXT>neural networks</TEXT></DOC>\n"
    "<DOC><DOCNO>B</DOCNO><year>2005</year><TEXT>deep learning</TEXT></DOC>\n"
    "<DOC><DOCNO>C</DOCNO><year>2012</year><TEXT>networks neural</TEXT></DOC>\n";

/// Six documents; phrase matches with year > 2009 are A and D.
inline constexpr std::string_view kSixDocTrec =
    "<DOC>\n<DOCNO>A</DOCNO>\n<year>2010</year>\n<TEXT>\nNeural networks are popular for ranking.\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>B</DOCNO>\n<year>2005</year>\n<TEXT>\nDeep learning methods predate the boom.\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>C</DOCNO>\n<year>2012</year>\n<TEXT>\nNetworks of neural units, reversed order.\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>D</DOCNO>\n<year>2015</year>\n<TEXT>\nRecent deep learning and deep learning advances.\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>E</DOCNO>\n<year>2009</year>\n<TEXT>\nNeural networks and deep learning in 2009.\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>F</DOCNO>\n<TEXT>\nDeep learning with neural networks, year unknown.\n</TEXT>\n</DOC>\n";

}  // namespace fixtures
