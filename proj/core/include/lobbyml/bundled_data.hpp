#pragma once

#include <string_view>

// Contents of core/data/*.txt, compiled into the library.
namespace lobbyml::bundled {

std::string_view english_stopwords();
std::string_view law_stopwords();
std::string_view lemma_exceptions();

}  // namespace lobbyml::bundled
