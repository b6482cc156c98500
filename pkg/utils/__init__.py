# Utils package for chat-to-excel application 