#pragma once

#include "lring/error.hpp"
#include "lring/rational.hpp"
#include "lring/element.hpp"
#include "lring/lattice.hpp"
#include "lring/hom.hpp"
#include "lring/linalg.hpp"
#include "lring/topology.hpp"
#include "lring/boundedness.hpp"
#include "lring/sampling.hpp"
#include "lring/hom_calculus.hpp"
#include "lring/hom_spaces.hpp"
#include "lring/suites.hpp"
#include "lring/io.hpp"
#include "lring/gallery.hpp"
#include "lring/commands.hpp"
