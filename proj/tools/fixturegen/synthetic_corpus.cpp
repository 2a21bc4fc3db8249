#include "synthetic_corpus.hpp"

#include <cctype>
#include <cstdio>
#include <vector>

#include <nlohmann/json.hpp>

#include "aaechat/common/random.hpp"

namespace aaechat::fixturegen {
namespace {

using nlohmann::json;

struct Bank {
  std::vector<std::string> roles;
  std::vector<std::string> bot;
  std::vector<std::string> user;
};

const std::vector<std::string> kNames = {"Jasmine", "Marcus", "Keisha", "Andre", "Tanya", "Darnell", "Monique",
                                         "Terrence", "Aaliyah", "Jerome", "Imani", "Curtis", "Latoya", "Reggie"};

const std::vector<std::string> kBridges = {
    "Let me check that for you right now.",
    "I want to make sure we get this right.",
    "That is a good question and I am glad you asked.",
    "We are going to take care of it step by step.",
    "Is there anything else I can help you with today?",
    "I am looking into it, so give me one moment.",
};

const std::vector<Bank> kBanks = {
    {{"Customer Service Representative", "Receptionist"},
     {"Thank you for calling, how can I help you today?",
      "I see the charge of $49.99 on your account from last Tuesday.",
      "I can refund 100% of the fee because the delay was on our end.",
      "Your order number is 4417 and it shipped on the 3rd.",
      "Dr. Patel has an opening at 3:30 tomorrow afternoon if that works for you.",
      "I am sorry about the wait, we are getting a lot of calls this morning.",
      "Please hold while I transfer you to the billing department.",
      "The replacement part costs $12.50 and it should arrive in 2 days.",
      "You can sign in to the portal and update your address there.",
      "I just sent a confirmation email to the address on file."},
     {"Hi, I have a question about my bill.", "I think I was charged twice for the same thing.",
      "Can you tell me when my package is going to arrive?", "I need to reschedule my appointment.",
      "That would be great, thank you.", "How long is that going to take?", "Okay, I can wait.",
      "Do I need to bring anything with me?", "What is the total going to be?", "Perfect, that works for me."}},
    {{"Clerk", "Salesperson"},
     {"Welcome in, are you looking for anything in particular?",
      "Those shoes are on sale for 30% off this week.",
      "The jacket comes in three colors and it is $89.",
      "With the discount your total comes to $62.30.",
      "We have a 30-day return policy as long as you keep the receipt.",
      "I can check the back to see if we have that in a size 10.",
      "That model is our best seller because it lasts for years.",
      "If you sign up for the card you get an extra 15% off today.",
      "Let me ring that up for you at the register.",
      "This one is a little more expensive but the quality is better."},
     {"I am just looking around for now.", "Do you have this in a bigger size?", "How much is this one?",
      "Is it going to go on sale soon?", "Can I return it if it doesn't fit?", "I want to try it on first.",
      "That is a little more than I wanted to spend.", "Okay, I will take it.", "Do you take cards?",
      "Thanks for your help."}},
    {{"Doctor"},
     {"Hi there, what brings you in today?",
      "How long have you been feeling this way?",
      "Your blood pressure is 128 over 84, which is a little high.",
      "I want you to take 2 tablets twice a day with food.",
      "Your test results came back and everything looks normal.",
      "There is about a 5% chance of side effects, and they are usually mild.",
      "I am going to refer you to Dr. Nguyen, who is a specialist.",
      "Try to drink more water and get at least 7.5 hours of sleep.",
      "If the pain gets worse, please come back right away.",
      "We can schedule a follow-up visit in 2 weeks."},
     {"I have been having headaches for a few days.", "It started last week.",
      "Is it something serious?", "Do I need to take medicine for it?", "Okay, that makes sense.",
      "What should I do if it doesn't get better?", "I have been really tired lately.",
      "Can I still go to work?", "Thank you, doctor.", "How often should I take it?"}},
    {{"Teacher", "Professor"},
     {"Good morning, let's get started with today's lesson.",
      "Take a look at problem 4 and tell me what you notice.",
      "You got 85% on the quiz, which is a big improvement.",
      "The essay is due on Friday and it should be about 1,500 words.",
      "Remember that the area of a circle is 3.14 times the radius squared.",
      "Let's go through it together so you can see each step.",
      "Mr. Johnson will be covering the class on Thursday.",
      "If you are stuck, try breaking the problem into smaller parts.",
      "Office hours are on Tuesdays from 2 to 4 in room 210.",
      "I think you are ready for the test, you just need to review chapter 6."},
     {"I am really struggling with this chapter.", "I don't understand how to start.",
      "Can you explain it one more time?", "When is the next test?", "Okay, I think I get it now.",
      "How much is the final worth?", "Can I get extra credit?", "That helps a lot, thank you.",
      "What should I study first?", "I will try that tonight."}},
    {{"Friend"},
     {"Hey, it has been forever, how are you doing?",
      "I am so proud of you for getting that job.",
      "We should grab dinner this weekend, my treat.",
      "I saw that movie last week and it was really good.",
      "Don't worry about it, everybody has bad days.",
      "I am going to the game on Saturday if you want to come.",
      "Tickets are only $20 so it is not too bad.",
      "You can always call me if you need to talk.",
      "I remember when we were in the 8th grade and got lost on that trip.",
      "Let me know what time works for you."},
     {"I am doing okay, just busy with work.", "I have been stressed out lately.",
      "That sounds like fun.", "What time is the game?", "I miss hanging out with you.",
      "Thanks, that means a lot.", "I don't know if I can make it.", "Sure, let's do it.",
      "Did you hear what happened at work?", "I will text you later."}},
};

const std::vector<Bank> kOffDomain = {
    {{"Lawyer"},
     {"Let's review the contract before you sign anything.", "The hearing is set for the 14th."},
     {"Do I need to be there in person?", "What happens if they don't agree?"}},
    {{"Mechanic"},
     {"Your brakes are worn down, we should replace them.", "The repair will be about $340."},
     {"Can you fix it today?", "Is it safe to drive?"}},
    {{"Chef"},
     {"Tonight's special is grilled salmon with rice.", "We use fresh herbs from the garden."},
     {"Is it spicy?", "Can I get it without onions?"}},
};

template <typename T>
const T& pick(SeededRng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.uniform_below(v.size()))];
}

std::string long_reply(SeededRng& rng, const Bank& bank) {
  std::string out = pick(rng, bank.bot);
  const auto extra = 2 + rng.uniform_below(3);
  for (std::uint64_t i = 0; i < extra; ++i) out += " " + pick(rng, i % 2 ? kBridges : bank.bot);
  return out;
}

json make_dialogue(SeededRng& rng, const std::string& id, const Bank& bank, const std::string& role_label,
                   std::size_t turns) {
  json speakers = json::array();
  json utterances = json::array();
  const auto& name = pick(rng, kNames);
  const bool bot_first = rng.uniform_below(2) == 0;
  for (std::size_t i = 0; i < turns; ++i) {
    const bool bot = (i % 2 == 0) == bot_first;
    speakers.push_back(bot ? role_label : name);
    if (bot) {
      utterances.push_back(rng.uniform_below(4) == 0 ? long_reply(rng, bank) : pick(rng, bank.bot));
    } else {
      utterances.push_back(pick(rng, bank.user));
    }
  }
  return {{"id", id}, {"speakers", speakers}, {"utterances", utterances}};
}

// Label variants exercise trimming and case folding in role matching.
std::string label_variant(SeededRng& rng, const std::string& role) {
  switch (rng.uniform_below(8)) {
    case 0: {
      std::string upper = role;
      for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return upper;
    }
    case 1:
      return " " + role + " ";
    default:
      return role;
  }
}

}  // namespace

std::string make_synthetic_corpus(const CorpusShape& shape) {
  SeededRng rng(shape.seed);
  std::vector<std::string> lines;
  std::size_t next_id = 1;
  auto new_id = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "soda-%05zu", next_id++);
    return std::string(buf);
  };

  for (const auto& bank : kBanks) {
    for (std::size_t k = 0; k < shape.per_domain; ++k) {
      const auto& role = bank.roles[k % bank.roles.size()];
      const auto turns = 10 + rng.uniform_below(3);
      lines.push_back(make_dialogue(rng, new_id(), bank, label_variant(rng, role), turns).dump());
    }
    for (std::size_t k = 0; k < shape.too_short / kBanks.size() + 1; ++k) {
      const auto turns = 6 + rng.uniform_below(3);
      lines.push_back(make_dialogue(rng, new_id(), bank, bank.roles.front(), turns).dump());
    }
  }
  for (std::size_t k = 0; k < shape.off_domain; ++k) {
    const auto& bank = kOffDomain[k % kOffDomain.size()];
    lines.push_back(make_dialogue(rng, new_id(), bank, bank.roles.front(), 10 + rng.uniform_below(3)).dump());
  }
  lines.push_back(R"({"id": "broken-1", "speakers": ["Doctor", "Sam"]})");
  lines.push_back(R"({"id": "broken-2", "speakers": ["Doctor"], "utterances": ["Hi.", "Hello."]})");
  lines.push_back(R"({"id": "broken-3", "speakers": ["Doctor", "Sam"], "utterances": ["Hi.")");

  rng.shuffle(lines);
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace aaechat::fixturegen
