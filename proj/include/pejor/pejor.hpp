#pragma once

// Everything in one include.

#include "pejor/agreement.hpp"
#include "pejor/classifier.hpp"
#include "pejor/corpus.hpp"
#include "pejor/embedding.hpp"
#include "pejor/enrichment.hpp"
#include "pejor/error.hpp"
#include "pejor/evaluation.hpp"
#include "pejor/io.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/llm.hpp"
#include "pejor/matcher.hpp"
#include "pejor/pipeline.hpp"
#include "pejor/random.hpp"
#include "pejor/synthetic.hpp"
#include "pejor/utf8.hpp"
