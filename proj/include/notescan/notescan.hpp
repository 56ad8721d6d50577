#pragma once

#include "notescan/commands.hpp"
#include "notescan/config.hpp"
#include "notescan/dataset.hpp"
#include "notescan/eval.hpp"
#include "notescan/experiment.hpp"
#include "notescan/fixtures.hpp"
#include "notescan/image.hpp"
#include "notescan/image_io.hpp"
#include "notescan/imaging.hpp"
#include "notescan/learn/forest.hpp"
#include "notescan/learn/model.hpp"
#include "notescan/learn/naive_bayes.hpp"
#include "notescan/learn/part.hpp"
#include "notescan/learn/tree.hpp"
#include "notescan/resample.hpp"
#include "notescan/tabular_io.hpp"
#include "notescan/texfeat.hpp"
