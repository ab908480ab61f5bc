#include "gsr/resources.hpp"

#include <array>

namespace gsr::resources {

namespace {

constexpr auto kStopWords = std::to_array<std::string_view>({
    "a", "about", "above", "across", "after", "afterwards", "again", "against", "all", "almost",
    "alone", "along", "already", "also", "although", "always", "am", "among", "amongst", "amoungst",
    "amount", "an", "and", "another", "any", "anyhow", "anyone", "anything", "anyway", "anywhere",
    "are", "around", "as", "at", "back", "be", "became", "because", "become", "becomes", "becoming",
    "been", "before", "beforehand", "behind", "being", "below", "beside", "besides", "between",
    "beyond", "bill", "both", "bottom", "but", "by", "call", "can", "cannot", "cant", "co", "con",
    "could", "couldnt", "cry", "de", "describe", "detail", "do", "done", "down", "due", "during",
    "each", "eg", "eight", "either", "eleven", "else", "elsewhere", "empty", "enough", "etc",
    "even", "ever", "every", "everyone", "everything", "everywhere", "except", "few", "fifteen",
    "fifty", "fill", "find", "fire", "first", "five", "for", "former", "formerly", "forty", "found",
    "four", "from", "front", "full", "further", "get", "give", "go", "had", "has", "hasnt", "have",
    "he", "hence", "her", "here", "hereafter", "hereby", "herein", "hereupon", "hers", "herself",
    "him", "himself", "his", "how", "however", "hundred", "i", "ie", "if", "in", "inc", "indeed",
    "interest", "into", "is", "it", "its", "itself", "keep", "last", "latter", "latterly", "least",
    "less", "ltd", "made", "many", "may", "me", "meanwhile", "might", "mill", "mine", "more",
    "moreover", "most", "mostly", "move", "much", "must", "my", "myself", "name", "namely",
    "neither", "never", "nevertheless", "next", "nine", "no", "nobody", "none", "noone", "nor",
    "not", "nothing", "now", "nowhere", "of", "off", "often", "on", "once", "one", "only", "onto",
    "or", "other", "others", "otherwise", "our", "ours", "ourselves", "out", "over", "own", "part",
    "per", "perhaps", "please", "put", "rather", "re", "same", "see", "seem", "seemed", "seeming",
    "seems", "serious", "several", "she", "should", "show", "side", "since", "sincere", "six",
    "sixty", "so", "some", "somehow", "someone", "something", "sometime", "sometimes", "somewhere",
    "still", "such", "system", "take", "ten", "than", "that", "the", "their", "them", "themselves",
    "then", "thence", "there", "thereafter", "thereby", "therefore", "therein", "thereupon",
    "these", "they", "thick", "thin", "third", "this", "those", "though", "three", "through",
    "throughout", "thru", "thus", "to", "together", "too", "top", "toward", "towards", "twelve",
    "twenty", "two", "un", "under", "until", "up", "upon", "us", "very", "via", "was", "we", "well",
    "were", "what", "whatever", "when", "whence", "whenever", "where", "whereafter", "whereas",
    "whereby", "wherein", "whereupon", "wherever", "whether", "which", "while", "whither", "who",
    "whoever", "whole", "whom", "whose", "why", "will", "with", "within", "without", "would", "yet",
    "you", "your", "yours", "yourself", "yourselves",
});

constexpr auto kMaleEntities = std::to_array<std::string_view>({
    "actor", "actors", "bachelor", "bachelors", "bloke", "blokes", "boy", "boys", "boyfriend",
    "boyfriends", "brother", "brothers", "brethren", "businessman", "businessmen", "chairman",
    "chairmen", "chap", "chaps", "congressman", "congressmen", "councilman", "councilmen", "dad",
    "daddy", "dads", "dude", "dudes", "ex-boyfriend", "ex-boyfriends", "exboyfriend",
    "exboyfriends", "father", "fathers", "fella", "fellas", "gentleman", "gentlemen", "godfather",
    "godfathers", "grandfather", "grandfathers", "grandpa", "grandson", "grandsons", "guy", "guys",
    "handyman", "handymen", "he", "him", "himself", "his", "husband", "husbands", "king", "kings",
    "lad", "lads", "male", "males", "man", "men", "monk", "monks", "mr", "nephew", "nephews", "pa",
    "prince", "princes", "salesman", "salesmen", "schoolboy", "schoolboys", "son", "sons",
    "spokesman", "spokesmen", "statesman", "statesmen", "stepfather", "stepfathers", "stepson",
    "stepsons", "uncle", "uncles", "waiter", "waiters",
});

constexpr auto kFemaleEntities = std::to_array<std::string_view>({
    "actress", "actresses", "aunt", "aunts", "ballerina", "ballerinas", "bride", "brides",
    "businesswoman", "businesswomen", "chairwoman", "chairwomen", "congresswoman", "congresswomen",
    "councilwoman", "councilwomen", "daughter", "daughters", "exgirlfriend", "exgirlfriends",
    "ex-girlfriend", "ex-girlfriends", "female", "females", "gal", "gals", "girl", "girls",
    "girlfriend", "girlfriends", "godmother", "godmothers", "granddaughter", "granddaughters",
    "grandma", "grandmas", "grandmother", "grandmothers", "her", "hers", "herself", "hostess",
    "hostesses", "housewife", "housewives", "lady", "ladies", "ma", "maid", "maiden", "maids",
    "mama", "mom", "mommy", "moms", "mother", "mothers", "ms", "mrs", "niece", "nieces", "nun",
    "nuns", "princess", "princesses", "queen", "queens", "schoolgirl", "schoolgirls", "she",
    "sister", "sisters", "spokeswoman", "spokeswomen", "stepdaughter", "stepmother", "waitress",
    "waitresses", "wife", "wives", "woman", "women",
});

constexpr std::array<std::string_view, 15> kAgency = {
    "aggressive", "ambitious", "arrogant", "confident", "courageous", "critical", "decisive", "demanding",
    "hardworking", "independent", "possessive", "proud", "selfish", "strong", "stubborn",
};

constexpr std::array<std::string_view, 12> kCommunion = {
    "affectionate", "compassionate", "emotional", "generous", "honest", "nurturing",
    "outgoing", "patient", "polite", "romantic", "sensitive", "unselfish",
};

constexpr std::array<std::string_view, 8> kScience = {
    "astronomy", "chemistry", "Einstein", "experiment", "NASA", "physics", "science", "technology",
};

constexpr std::array<std::string_view, 8> kArts = {
    "art", "dance", "drama", "literature", "novel", "poetry", "Shakespeare", "symphony",
};

constexpr std::array<std::string_view, 8> kCareer = {
    "business", "career", "corporation", "executive", "management", "office", "professional", "salary",
};

constexpr std::array<std::string_view, 8> kFamily = {
    "children", "cousin", "family", "home", "marriage", "parents", "relatives", "wedding",
};

constexpr std::array<JobShare, 10> kMaleJobs = {{
    {"stonemason", 0.7, 99.3},
    {"roofer", 1.9, 98.1},
    {"electrician", 2.2, 97.8},
    {"plumber", 2.7, 97.3},
    {"carpenter", 2.8, 97.2},
    {"firefighter", 3.3, 96.7},
    {"millwright", 5.0, 95.0},
    {"welder", 5.3, 94.7},
    {"machinist", 5.6, 94.4},
    {"driver", 6.7, 93.3},
}};

constexpr std::array<JobShare, 10> kFemaleJobs = {{
    {"hygienist", 96.0, 4.0},
    {"secretary", 93.2, 6.8},
    {"hairdresser", 92.3, 7.7},
    {"dietician", 92.1, 7.9},
    {"paralegal", 89.6, 10.4},
    {"receptionist", 89.3, 10.7},
    {"phlebotomist", 89.3, 10.7},
    {"maid", 89.0, 11.0},
    {"nurse", 88.9, 11.1},
    {"typist", 86.0, 14.0},
}};

}  // namespace

std::span<const std::string_view> english_stop_words() { return kStopWords; }
std::span<const std::string_view> male_entities() { return kMaleEntities; }
std::span<const std::string_view> female_entities() { return kFemaleEntities; }
std::span<const std::string_view> agency_traits() { return kAgency; }
std::span<const std::string_view> communion_traits() { return kCommunion; }
std::span<const std::string_view> science_terms() { return kScience; }
std::span<const std::string_view> arts_terms() { return kArts; }
std::span<const std::string_view> career_terms() { return kCareer; }
std::span<const std::string_view> family_terms() { return kFamily; }
std::span<const JobShare> male_jobs() { return kMaleJobs; }
std::span<const JobShare> female_jobs() { return kFemaleJobs; }

}  // namespace gsr::resources
