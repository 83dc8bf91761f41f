#pragma once

#include "nielsen/certificate.hpp"
#include "nielsen/corpus.hpp"
#include "nielsen/driver.hpp"
#include "nielsen/graph_core.hpp"
#include "nielsen/graph_io.hpp"
#include "nielsen/graph_of_graphs.hpp"
#include "nielsen/links.hpp"
#include "nielsen/moves.hpp"
#include "nielsen/nielsen_moves.hpp"
#include "nielsen/rose.hpp"
#include "nielsen/surface_group.hpp"
#include "nielsen/surface_word.hpp"
#include "nielsen/whitehead.hpp"
#include "nielsen/words.hpp"
